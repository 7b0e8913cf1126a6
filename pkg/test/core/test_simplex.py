# Copyright 2025 The gjsloss Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import math

import numpy as np
import pytest


def test_entropy_examples():
    from gjsloss.core import entropy, one_hot, uniform

    assert entropy(one_hot(0, 3)) == 0.0, "one-hot distributions have no entropy"
    assert entropy(uniform(2)) == pytest.approx(math.log(2), abs=1e-12)
    assert entropy([0.75, 0.25]) == pytest.approx(0.5623351, abs=1e-7)


def test_entropy_batch():
    from gjsloss.core import entropy

    result = entropy(np.array([[1.0, 0.0], [0.5, 0.5]]))
    assert result.shape == (2,), "batched entropy did not reduce over the class axis"
    assert result == pytest.approx([0.0, math.log(2)])


def test_prob_vec_tolerances():
    from gjsloss.core import prob_vec, InvalidDistribution

    exact = prob_vec([0.5, 0.5 + 1e-10])
    assert exact[1] == 0.5 + 1e-10, "sums within 1e-9 must be kept as-is"

    renormalized = prob_vec([0.5, 0.5 + 1e-7])
    assert renormalized.sum() == pytest.approx(1.0, abs=1e-15)

    with pytest.raises(InvalidDistribution, match="does not sum to 1"):
        prob_vec([0.5, 0.6])
    with pytest.raises(InvalidDistribution, match="negative"):
        prob_vec([1.5, -0.5])
    with pytest.raises(InvalidDistribution, match="at least 2 classes"):
        prob_vec([1.0])
    with pytest.raises(InvalidDistribution, match="non-finite"):
        prob_vec([math.nan, 1.0])


def test_weight_vec():
    from gjsloss.core import weight_vec, InvalidDistribution

    assert weight_vec([0.25, 0.75]) == pytest.approx([0.25, 0.75])
    with pytest.raises(InvalidDistribution, match="strictly positive"):
        weight_vec([1.0, 0.0])
    with pytest.raises(InvalidDistribution, match="at least 2"):
        weight_vec([1.0])


def test_kl_div():
    from gjsloss.core import kl_div, one_hot, uniform, AbsoluteContinuityViolation

    p = [0.2, 0.3, 0.5]
    assert kl_div(p, p) == pytest.approx(0.0, abs=1e-15)
    assert kl_div(one_hot(0, 2), uniform(2)) == pytest.approx(math.log(2), abs=1e-12)
    with pytest.raises(AbsoluteContinuityViolation):
        kl_div(uniform(2), one_hot(0, 2))


def test_kl_dimension_mismatch():
    from gjsloss.core import kl_div, DimensionMismatch

    with pytest.raises(DimensionMismatch, match="number of classes"):
        kl_div([0.5, 0.5], [0.2, 0.3, 0.5])


def test_mixture():
    from gjsloss.core import mixture, one_hot, uniform, DimensionMismatch

    assert mixture([0.5, 0.5], [one_hot(0, 2), uniform(2)]) == pytest.approx([0.75, 0.25])
    eye = [one_hot(i, 3) for i in range(3)]
    assert mixture([1 / 3, 1 / 3, 1 / 3], eye) == pytest.approx(uniform(3))
    with pytest.raises(DimensionMismatch, match="weights given"):
        mixture([0.5, 0.5], eye)


def test_softmax():
    from gjsloss.core import softmax, uniform

    assert softmax([0.0, 0.0]) == pytest.approx([0.5, 0.5])
    assert softmax([123.0, 123.0, 123.0]) == pytest.approx(uniform(3))
    assert softmax([math.log(3), 0.0]) == pytest.approx([0.75, 0.25])
    assert np.all(np.isfinite(softmax([1000.0, -1000.0]))), "softmax overflowed"


def test_softmax_jacobian():
    from gjsloss.core import softmax_jacobian, softmax_jacobian_entry

    assert softmax_jacobian_entry([0.5, 0.5], 0, 0) == pytest.approx(0.25)
    assert softmax_jacobian_entry([0.5, 0.5], 0, 1) == pytest.approx(-0.25)

    p = np.array([0.2, 0.3, 0.5])
    J = softmax_jacobian(p)
    assert J.sum(axis=0) == pytest.approx(np.zeros(3), abs=1e-15), "columns must sum to 0"
    for j in range(3):
        for i in range(3):
            assert J[j, i] == pytest.approx(softmax_jacobian_entry(p, j, i))


def test_softmax_vjp_matches_jacobian():
    from gjsloss.core import softmax_jacobian, softmax_vjp

    rng = np.random.default_rng(3)
    p = rng.dirichlet(np.ones(4))
    g = rng.normal(size=4)
    assert softmax_vjp(p, g) == pytest.approx(softmax_jacobian(p).T @ g)


def test_clamp_project():
    from gjsloss.core import clamp_project, InvalidDistribution

    assert clamp_project([0.5, 0.5]) == pytest.approx([0.5, 0.5])
    assert clamp_project([2.0, 2.0]) == pytest.approx([0.5, 0.5])
    clamped = clamp_project([1.0, 0.0])
    assert clamped[1] > 0, "the floor was not applied"
    assert clamped[1] == pytest.approx(1e-12, rel=1e-3)
    assert clamped.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidDistribution, match="no positive mass"):
        clamp_project([0.0, -1.0])


def test_class_index():
    from gjsloss.core import one_hot, InvalidClassIndex

    with pytest.raises(InvalidClassIndex, match="out of range"):
        one_hot(3, 3)
    with pytest.raises(InvalidClassIndex):
        one_hot(-1, 3)


def test_gjs_weights():
    from gjsloss.core import gjs_weights, InvalidDistribution

    assert gjs_weights(0.5, 3) == pytest.approx([0.5, 0.25, 0.25])
    with pytest.raises(InvalidDistribution, match="π₁"):
        gjs_weights(1.0, 3)


def test_stack_distributions():
    from gjsloss.core import stack_distributions, one_hot, uniform, DimensionMismatch

    stacked = stack_distributions([one_hot(0, 3), uniform(3)])
    assert stacked.shape == (2, 3), "distributions were not stacked on a new axis"
    assert stacked[1] == pytest.approx([1 / 3] * 3)
    with pytest.raises(DimensionMismatch):
        stack_distributions([one_hot(0, 3), uniform(2)])
    with pytest.raises(DimensionMismatch, match="at least one"):
        stack_distributions([])

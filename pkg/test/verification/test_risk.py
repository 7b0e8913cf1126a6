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
import numpy as np
import pytest

from gjsloss.data import NoiseKind, NoiseSpec
from gjsloss.losses import LossKind, LossSpec


def _instance(**kwargs):
    from gjsloss.verification import RiskInstance

    arguments = dict(
        num_inputs=2,
        K=3,
        clean_labels=(0, 2),
        noise=NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.3),
        grid_resolution=10,
    )
    arguments.update(kwargs)
    return RiskInstance(**arguments)


def test_risk_js_example():
    from gjsloss.verification import bound_constants, risk_bound_enumeration

    spec = LossSpec(LossKind.JS, pi1=0.9)
    gaps = risk_bound_enumeration(_instance(), spec)
    b_lower, b_upper = bound_constants(spec, 3)
    assert gaps.noisy_bound == pytest.approx(0.3 * (b_upper - b_lower) / 2)
    assert 0 <= gaps.noisy_gap <= gaps.noisy_bound + 1e-9
    assert gaps.clean_bound - 1e-9 <= gaps.clean_gap <= 1e-12
    assert gaps.worst_violation() <= 1e-9


def test_risk_mae_zero_gap():
    from gjsloss.verification import risk_bound_enumeration

    gaps = risk_bound_enumeration(_instance(), LossSpec(LossKind.MAE))
    assert gaps.noisy_gap == pytest.approx(0.0, abs=1e-12)
    assert gaps.noisy_bound == pytest.approx(0.0, abs=1e-12)


def test_risk_ce_refused():
    from gjsloss.verification import UnboundedLossError, risk_bound_enumeration

    with pytest.raises(UnboundedLossError):
        risk_bound_enumeration(_instance(), LossSpec(LossKind.CE))


def test_risk_instance_validation():
    from gjsloss.verification import InvalidRiskInstance

    with pytest.raises(InvalidRiskInstance, match="below 1 - 1/K"):
        _instance(noise=NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.7))
    with pytest.raises(InvalidRiskInstance, match="symmetric-exclusive"):
        _instance(noise=NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.3))
    with pytest.raises(InvalidRiskInstance, match="grid resolution"):
        _instance(grid_resolution=1)
    with pytest.raises(InvalidRiskInstance, match="clean labels"):
        _instance(clean_labels=(0,))


def test_risk_cap():
    from gjsloss.verification import ResourceCapExceeded, risk_bound_enumeration

    with pytest.raises(ResourceCapExceeded):
        risk_bound_enumeration(_instance(cap=100), LossSpec(LossKind.JS))


def test_regression_corpus():
    from gjsloss.verification import regression_corpus, risk_bound_enumeration

    corpus = regression_corpus(seed=0)
    assert len(corpus) == 20
    for spec in (LossSpec(LossKind.JS, pi1=0.5), LossSpec(LossKind.GJS, pi1=0.5, M=3)):
        for inst in corpus[:6]:
            gaps = risk_bound_enumeration(inst, spec)
            assert gaps.worst_violation() <= 1e-9, f"{spec.kind} on {inst}: {gaps}"

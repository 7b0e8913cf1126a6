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


def test_lattice_size():
    from gjsloss.core import lattice_size, simplex_lattice

    assert lattice_size(3, 30) == 496
    lattice = simplex_lattice(3, 30)
    assert lattice.shape == (496, 3)
    assert lattice.sum(axis=1) == pytest.approx(np.ones(496))
    assert len({tuple(row) for row in lattice}) == 496, "lattice points repeat"


def test_lattice_contains_vertices_and_barycenter():
    from gjsloss.core import simplex_lattice

    lattice = simplex_lattice(3, 6)
    rows = {tuple(np.round(row, 12)) for row in lattice}
    for vertex in np.eye(3):
        assert tuple(vertex) in rows, f"vertex {vertex} missing"
    assert tuple(np.round(np.full(3, 1 / 3), 12)) in rows, "barycenter missing"


def test_lattice_cap():
    from gjsloss.core import LatticeTooLarge, simplex_lattice

    with pytest.raises(LatticeTooLarge, match="exceeding the cap"):
        simplex_lattice(5, 60, cap=1000)


def test_random_simplex_min_entry():
    from gjsloss.core import random_simplex

    rng = np.random.default_rng(0)
    points = random_simplex(rng, 1000, 5, min_entry=0.1)
    assert points.min() >= 0.1 - 1e-15
    assert points.sum(axis=1) == pytest.approx(np.ones(1000))
    with pytest.raises(ValueError, match="no room"):
        random_simplex(rng, 10, 10, min_entry=0.1)


def test_random_logits():
    from gjsloss.core import random_logits

    first = random_logits(np.random.default_rng(3), 5, 4)
    second = random_logits(np.random.default_rng(3), 5, 4)
    assert first.shape == (5, 4), "one row of logits per sample"
    assert np.array_equal(first, second), "logits were not reproducible from the seed"

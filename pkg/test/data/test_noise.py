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


def _train_only(N: int, K: int, seed: int = 0):
    from gjsloss.data import Dataset

    rng = np.random.default_rng(seed)
    labels = rng.integers(0, K, size=N)
    return Dataset(features=rng.normal(size=(N, 2)), labels=labels, clean_labels=labels, K=K)


def test_spec_validation():
    from gjsloss.data import InvalidNoiseSpec

    with pytest.raises(InvalidNoiseSpec, match="eta"):
        NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=1.0)
    with pytest.raises(InvalidNoiseSpec, match="pair_map is required"):
        NoiseSpec(NoiseKind.ASYMMETRIC_PAIRMAP, eta=0.2)
    with pytest.raises(InvalidNoiseSpec, match="pair_map is required"):
        NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.2, pair_map={0: 1})
    with pytest.raises(InvalidNoiseSpec, match="onto itself"):
        NoiseSpec(NoiseKind.ASYMMETRIC_PAIRMAP, eta=0.2, pair_map={0: 0})
    with pytest.raises(InvalidNoiseSpec, match="disjoint"):
        NoiseSpec(NoiseKind.ASYMMETRIC_CYCLE, eta=0.2, groups=((0, 1), (1, 2)))
    with pytest.raises(InvalidNoiseSpec, match="out of range"):
        NoiseSpec(NoiseKind.ASYMMETRIC_PAIRMAP, eta=0.2, pair_map={0: 5}).validate(3)
    with pytest.raises(InvalidNoiseSpec):
        NoiseSpec("gaussian")


def test_transition_matrices():
    from gjsloss.data import transition_matrix

    resample = transition_matrix(NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.4), 4)
    assert resample[0, 0] == pytest.approx(0.7)
    assert resample[0, 1] == pytest.approx(0.1)

    exclusive = transition_matrix(NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.3), 4)
    assert exclusive[2, 2] == pytest.approx(0.7)
    assert exclusive[2, 0] == pytest.approx(0.1)

    cycle = transition_matrix(
        NoiseSpec(NoiseKind.ASYMMETRIC_CYCLE, eta=0.4, groups=((1, 2, 3),)), 5
    )
    assert cycle[3, 1] == pytest.approx(0.4), "cycles wrap around within the group"
    assert cycle[0, 0] == 1.0, "classes outside every group are untouched"
    for T in (resample, exclusive, cycle):
        assert T.sum(axis=1) == pytest.approx(np.ones(T.shape[0]))


def test_eta_zero_is_identity():
    from gjsloss.data import inject_noise

    ds = _train_only(500, 4)
    noisy = inject_noise(ds, NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.0))
    assert np.array_equal(noisy.labels, ds.clean_labels)


def test_symmetric_resample_rate():
    from gjsloss.data import expected_changed_fraction, inject_noise, noise_statistics

    ds = _train_only(10_000, 10)
    spec = NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.4, seed=1)
    noisy = inject_noise(ds, spec)
    stats = noise_statistics(noisy)
    counts = np.bincount(ds.clean_labels, minlength=10)
    assert expected_changed_fraction(spec, 10, counts) == pytest.approx(0.36)
    assert stats.changed_fraction == pytest.approx(0.36, abs=0.02)
    assert noisy.noise == spec


def test_symmetric_exclusive_always_changes():
    from gjsloss.data import inject_noise, noise_statistics

    ds = _train_only(5_000, 3)
    noisy = inject_noise(ds, NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.3, seed=2))
    assert noise_statistics(noisy).changed_fraction == pytest.approx(0.3, abs=0.02)


def test_asymmetric_pairmap():
    from gjsloss.data import inject_noise, noise_statistics

    ds = _train_only(4_000, 4)
    spec = NoiseSpec(NoiseKind.ASYMMETRIC_PAIRMAP, eta=0.4, pair_map={0: 1, 2: 3}, seed=3)
    stats = noise_statistics(inject_noise(ds, spec))
    confusion = stats.confusion
    assert confusion[1].sum() == confusion[1, 1], "unmapped classes must keep their labels"
    assert confusion[0, 2] == 0 and confusion[0, 3] == 0
    assert stats.per_class_rate[0] == pytest.approx(0.4, abs=0.05)
    assert stats.per_class_rate[1] == 0.0


def test_asymmetric_cycle_stays_in_group():
    from gjsloss.data import inject_noise, noise_statistics

    ds = _train_only(3_000, 6)
    groups = ((0, 1, 2), (3, 4))
    spec = NoiseSpec(NoiseKind.ASYMMETRIC_CYCLE, eta=0.3, groups=groups, seed=4)
    confusion = noise_statistics(inject_noise(ds, spec)).confusion

    group_of = {k: i for i, group in enumerate(groups) for k in group}
    for clean in range(6):
        for noisy in range(6):
            if confusion[clean, noisy] and clean != noisy:
                assert group_of.get(clean) is not None, f"class {clean} outside every group moved"
                assert group_of[clean] == group_of.get(noisy), f"{clean} -> {noisy} left its group"
    assert confusion[5].sum() == confusion[5, 5], "ungrouped class changed"
    assert confusion[0, 1] > 0 and confusion[4, 3] > 0, "labels were not cycled"


def test_noise_is_reproducible():
    from gjsloss.data import inject_noise

    ds = _train_only(1_000, 5)
    spec = NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.5, seed=9)
    assert inject_noise(ds, spec).equals(inject_noise(ds, spec))
    other = inject_noise(ds, NoiseSpec(NoiseKind.SYMMETRIC_RESAMPLE, eta=0.5, seed=10))
    assert not np.array_equal(other.labels, inject_noise(ds, spec).labels)


def test_held_out_rows_stay_clean():
    from gjsloss.data import Split, inject_noise, split

    ds = split(_train_only(2_000, 4), 0.2, seed=0, test_fraction=0.1)
    noisy = inject_noise(ds, NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=0.8, seed=0))
    for held_out in (Split.VAL, Split.TEST):
        _, labels, clean = noisy.part(held_out)
        assert np.array_equal(labels, clean), f"{held_out} labels were corrupted"


def test_spec_dict_round_trip():
    spec = NoiseSpec(NoiseKind.ASYMMETRIC_CYCLE, eta=0.2, groups=((0, 1, 2),), seed=4)
    assert NoiseSpec.from_dict(spec.to_dict()) == spec

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
from typing import Dict

import numpy as np

from .dataset import Dataset, Split
from ..common import derive_seed


class InvalidSplit(ValueError):
    pass


def _quotas(counts: np.ndarray, fraction: float) -> np.ndarray:
    """
    Per-class shares of ``round(fraction * N)`` rows by the largest remainder
    method; ties go to the lower class index.
    """
    exact = counts * fraction
    quotas = np.floor(exact).astype(np.int64)
    target = int(round(counts.sum() * fraction))
    remainders = exact - quotas
    order = np.lexsort((np.arange(len(counts)), -remainders))
    for c in order[: max(0, target - int(quotas.sum()))]:
        quotas[c] += 1
    return np.minimum(quotas, counts)


def split(
    ds: Dataset,
    val_fraction: float,
    seed: int = 0,
    test_fraction: float = 0.0,
) -> Dataset:
    """
    Tags a class-stratified validation set (and optionally a test set); the
    remaining rows are training rows.

    Validation and test rows are given back their clean labels, so noise
    injected before or after splitting never reaches them.

    :raises InvalidSplit: For fractions outside ``(0, 1)`` and ``[0, 1)`` or
        summing to one or more.
    """
    if not (0.0 < val_fraction < 1.0):
        raise InvalidSplit(f"val_fraction must lie in (0, 1), got {val_fraction}")
    if not (0.0 <= test_fraction < 1.0):
        raise InvalidSplit(f"test_fraction must lie in [0, 1), got {test_fraction}")
    if val_fraction + test_fraction >= 1.0 or math.isclose(val_fraction + test_fraction, 1.0):
        raise InvalidSplit(
            f"val_fraction + test_fraction must stay below 1, got {val_fraction + test_fraction}"
        )

    rng = np.random.default_rng(derive_seed(seed, "split"))
    clean = ds.clean_labels
    counts = np.bincount(clean, minlength=ds.K)
    val_quota = _quotas(counts, val_fraction)
    test_quota = _quotas(counts, test_fraction)
    test_quota = np.minimum(test_quota, counts - val_quota)

    splits = np.full(ds.N, Split.TRAIN.value, dtype="<U5")
    for c in range(ds.K):
        members = rng.permutation(np.flatnonzero(clean == c))
        v, t = int(val_quota[c]), int(test_quota[c])
        splits[members[:v]] = Split.VAL.value
        splits[members[v : v + t]] = Split.TEST.value

    held_out = splits != Split.TRAIN.value
    labels = np.where(held_out, clean, ds.labels)
    return ds.with_splits(splits, labels)


def split_sizes(ds: Dataset) -> Dict[str, int]:
    return {s.value: int(np.sum(ds.splits == s.value)) for s in Split}

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
from enum import Enum
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Dict, Optional, Tuple

import numpy as np

if TYPE_CHECKING:
    from .noise import NoiseSpec


class InvalidDataset(ValueError):
    pass


class Split(str, Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"

    def __str__(self) -> str:
        return self.value


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    A labeled dataset. Instances are immutable: the arrays are read-only
    copies and every transformation returns a new object.

    :param features: ``N×D`` finite reals.
    :param labels: The labels used for training, possibly noisy.
    :param clean_labels: The labels before any noise was injected.
    :param K: The number of classes.
    :param splits: One :class:`Split` tag per row, stored as strings.
    :param noise: The noise injected into ``labels``, if any.
    :param provenance: Free-form, JSON-serializable generation details.
    """

    features: np.ndarray
    labels: np.ndarray
    clean_labels: np.ndarray
    K: int
    splits: np.ndarray = field(default=None)  # type: ignore
    noise: Optional["NoiseSpec"] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)
        clean = np.asarray(self.clean_labels)
        if features.ndim != 2:
            raise InvalidDataset(f"features must be a matrix, got shape {features.shape}")
        N = features.shape[0]
        if N < 1:
            raise InvalidDataset("a dataset needs at least one row")
        if self.K < 2:
            raise InvalidDataset(f"K must be at least 2, got {self.K}")
        if not np.all(np.isfinite(features)):
            raise InvalidDataset("features must be finite")
        for name, array in (("labels", labels), ("clean_labels", clean)):
            if array.shape != (N,):
                raise InvalidDataset(f"{name} has shape {array.shape}, expected ({N},)")
            if not np.issubdtype(array.dtype, np.integer):
                raise InvalidDataset(f"{name} must hold integers, got {array.dtype}")
            if np.any(array < 0) or np.any(array >= self.K):
                raise InvalidDataset(f"{name} must lie in [0, {self.K})")
        splits = self.splits
        if splits is None:
            splits = np.full(N, Split.TRAIN.value)
        splits = np.asarray(splits, dtype="<U5")
        if splits.shape != (N,):
            raise InvalidDataset(f"splits has shape {splits.shape}, expected ({N},)")
        unknown = set(np.unique(splits).tolist()) - {s.value for s in Split}
        if len(unknown):
            raise InvalidDataset(f"unknown split tags: {sorted(unknown)}")

        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels.astype(np.int64)))
        object.__setattr__(self, "clean_labels", _frozen(clean.astype(np.int64)))
        object.__setattr__(self, "splits", _frozen(splits))
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "provenance", dict(self.provenance))

    @property
    def N(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def rows(self, split: Split) -> np.ndarray:
        """
        :returns: The indices of the rows tagged ``split``, in dataset order.
        """
        return np.flatnonzero(self.splits == Split(split).value)

    def part(self, split: Split) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        :returns: ``(features, labels, clean_labels)`` of the rows tagged
            ``split``.
        """
        idx = self.rows(split)
        return self.features[idx], self.labels[idx], self.clean_labels[idx]

    def with_labels(self, labels: np.ndarray, noise: Optional["NoiseSpec"]) -> "Dataset":
        return replace(self, labels=labels, noise=noise)

    def with_splits(self, splits: np.ndarray, labels: Optional[np.ndarray] = None) -> "Dataset":
        return replace(
            self, splits=splits, labels=self.labels if labels is None else labels
        )

    def equals(self, other: "Dataset") -> bool:
        """
        Bitwise equality of every array plus equal ``K`` and noise.
        """
        return (
            self.K == other.K
            and self.noise == other.noise
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.clean_labels, other.clean_labels)
            and np.array_equal(self.splits, other.splits)
        )

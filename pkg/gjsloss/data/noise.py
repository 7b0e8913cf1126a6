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
"""
Label noise models.

Symmetric noise exists in two flavors. ``symmetric-resample`` redraws a
corrupted label uniformly over all ``K`` classes, so it may land on the clean
one and the expected changed fraction is ``η(K-1)/K``. ``symmetric-exclusive``
moves it uniformly to one of the other ``K-1`` classes, changing a fraction
``η``. Asymmetric noise either follows a class pair map or cycles each label
to the next class of its group.
"""
from enum import Enum
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .dataset import Dataset, Split
from ..common import derive_seed
from ..logging import verbose


class InvalidNoiseSpec(ValueError):
    pass


class NoiseKind(str, Enum):
    SYMMETRIC_RESAMPLE = "symmetric-resample"
    SYMMETRIC_EXCLUSIVE = "symmetric-exclusive"
    ASYMMETRIC_PAIRMAP = "asymmetric-pairmap"
    ASYMMETRIC_CYCLE = "asymmetric-cycle"

    def __str__(self) -> str:
        return self.value


PairMap = Union[Mapping[int, int], Sequence[Tuple[int, int]]]


@dataclass(frozen=True)
class NoiseSpec:
    """
    :param kind: The noise model.
    :param eta: The probability that a label is corrupted, in ``[0, 1)``.
    :param pair_map: ``source → destination`` classes. Required for, and only
        accepted with, ``asymmetric-pairmap``.
    :param groups: A partition of (some of) the classes. Required for, and
        only accepted with, ``asymmetric-cycle``.
    :param seed: Seeds the corruption draws.
    """

    kind: NoiseKind
    eta: float = 0.0
    pair_map: Optional[Tuple[Tuple[int, int], ...]] = None
    groups: Optional[Tuple[Tuple[int, ...], ...]] = None
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", NoiseKind(self.kind))
        except ValueError as e:
            raise InvalidNoiseSpec(str(e)) from None
        eta = float(self.eta)
        if not (0.0 <= eta < 1.0):
            raise InvalidNoiseSpec(f"eta must lie in [0, 1), got {eta}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "seed", int(self.seed))

        if self.pair_map is not None:
            items = (
                self.pair_map.items()
                if isinstance(self.pair_map, Mapping)
                else self.pair_map
            )
            pairs = tuple(sorted((int(a), int(b)) for a, b in items))
            sources = [a for a, _ in pairs]
            if len(set(sources)) != len(sources):
                raise InvalidNoiseSpec(f"pair_map maps a class twice: {pairs}")
            if any(a == b for a, b in pairs):
                raise InvalidNoiseSpec(f"pair_map maps a class onto itself: {pairs}")
            object.__setattr__(self, "pair_map", pairs)
        if self.groups is not None:
            groups = tuple(tuple(int(c) for c in group) for group in self.groups)
            members = [c for group in groups for c in group]
            if len(set(members)) != len(members):
                raise InvalidNoiseSpec(f"groups must be disjoint: {groups}")
            object.__setattr__(self, "groups", groups)

        if (self.pair_map is not None) != (self.kind == NoiseKind.ASYMMETRIC_PAIRMAP):
            raise InvalidNoiseSpec(
                f"pair_map is required for, and only accepted with, {NoiseKind.ASYMMETRIC_PAIRMAP}"
            )
        if (self.groups is not None) != (self.kind == NoiseKind.ASYMMETRIC_CYCLE):
            raise InvalidNoiseSpec(
                f"groups are required for, and only accepted with, {NoiseKind.ASYMMETRIC_CYCLE}"
            )

    def validate(self, K: int):
        """
        :raises InvalidNoiseSpec: If any class mentioned lies outside
            ``[0, K)``.
        """
        mentioned = []
        if self.pair_map is not None:
            mentioned += [c for pair in self.pair_map for c in pair]
        if self.groups is not None:
            mentioned += [c for group in self.groups for c in group]
        bad = [c for c in mentioned if not (0 <= c < K)]
        if len(bad):
            raise InvalidNoiseSpec(f"classes {sorted(set(bad))} out of range for K={K}")

    def destinations(self, K: int) -> np.ndarray:
        """
        The deterministic destination of each class under the asymmetric
        models. Classes the model does not move map to themselves.
        """
        destination = np.arange(K)
        if self.pair_map is not None:
            for source, target in self.pair_map:
                destination[source] = target
        if self.groups is not None:
            for group in self.groups:
                for i, c in enumerate(group):
                    destination[c] = group[(i + 1) % len(group)]
        return destination

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "eta": self.eta,
            "pair_map": None if self.pair_map is None else [list(p) for p in self.pair_map],
            "groups": None if self.groups is None else [list(g) for g in self.groups],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(Self, d: Mapping[str, Any]) -> "NoiseSpec":
        pair_map = d.get("pair_map")
        groups = d.get("groups")
        return Self(
            kind=NoiseKind(d["kind"]),
            eta=float(d.get("eta", 0.0)),
            pair_map=None if pair_map is None else tuple(tuple(p) for p in pair_map),
            groups=None if groups is None else tuple(tuple(g) for g in groups),
            seed=int(d.get("seed", 0)),
        )


def transition_matrix(spec: NoiseSpec, K: int) -> np.ndarray:
    """
    ``T[i, j]``: the probability that clean class ``i`` is observed as ``j``.
    Every row sums to one.
    """
    spec.validate(K)
    eta = spec.eta
    identity = np.eye(K)
    if spec.kind == NoiseKind.SYMMETRIC_RESAMPLE:
        return (1.0 - eta) * identity + eta / K
    if spec.kind == NoiseKind.SYMMETRIC_EXCLUSIVE:
        return (1.0 - eta) * identity + eta / (K - 1) * (1.0 - identity)
    destination = spec.destinations(K)
    T = identity.copy()
    for source in range(K):
        if destination[source] != source:
            T[source, source] = 1.0 - eta
            T[source, destination[source]] = eta
    return T


def expected_changed_fraction(spec: NoiseSpec, K: int, class_counts: np.ndarray) -> float:
    """
    The expected fraction of changed labels for the given clean class counts.
    """
    T = transition_matrix(spec, K)
    counts = np.asarray(class_counts, dtype=np.float64)
    return float(np.dot(counts, 1.0 - np.diag(T)) / counts.sum())


def inject_noise(ds: Dataset, spec: NoiseSpec) -> Dataset:
    """
    Corrupts the training labels of ``ds`` once, starting from its clean
    labels.

    Each training row is corrupted independently with probability ``η``.
    Validation and test rows keep their clean labels. The draws depend only on
    ``spec.seed`` and the dataset size, so re-running is bit-identical.

    :returns: A new dataset whose ``labels`` are noisy and whose ``noise`` is
        ``spec``.
    """
    spec.validate(ds.K)
    K = ds.K
    N = ds.N
    clean = ds.clean_labels
    rng = np.random.default_rng(derive_seed(spec.seed, "noise"))
    corrupt = rng.random(N) < spec.eta
    corrupt &= ds.splits == Split.TRAIN.value

    if spec.kind == NoiseKind.SYMMETRIC_RESAMPLE:
        replacement = rng.integers(0, K, size=N)
    elif spec.kind == NoiseKind.SYMMETRIC_EXCLUSIVE:
        replacement = (clean + rng.integers(1, K, size=N)) % K
    else:
        replacement = spec.destinations(K)[clean]

    labels = np.where(corrupt, replacement, clean)
    noisy = ds.with_labels(labels, spec)
    verbose(
        f"Injected {spec.kind} noise (η={spec.eta}): {noise_statistics(noisy).changed_fraction:.4f} of training labels changed."
    )
    return noisy


@dataclass
class NoiseStatistics:
    """
    :param changed_fraction: The realized fraction of training labels that
        differ from their clean label.
    :param confusion: ``confusion[i, j]`` counts training rows with clean
        label ``i`` and observed label ``j``.
    """

    rows: int
    changed: int
    confusion: np.ndarray

    @property
    def changed_fraction(self) -> float:
        return self.changed / self.rows if self.rows else 0.0

    @property
    def per_class_rate(self) -> np.ndarray:
        """
        The realized corruption rate of each clean class.
        """
        totals = self.confusion.sum(axis=1)
        off_diagonal = totals - np.diag(self.confusion)
        return np.divide(
            off_diagonal,
            totals,
            out=np.zeros(len(totals), dtype=np.float64),
            where=totals > 0,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "changed": self.changed,
            "changed_fraction": self.changed_fraction,
            "per_class_rate": self.per_class_rate,
            "confusion": self.confusion,
        }


def noise_statistics(ds: Dataset) -> NoiseStatistics:
    """
    Realized noise over the training rows of ``ds``.
    """
    idx = ds.rows(Split.TRAIN)
    clean = ds.clean_labels[idx]
    noisy = ds.labels[idx]
    confusion = np.zeros((ds.K, ds.K), dtype=np.int64)
    np.add.at(confusion, (clean, noisy), 1)
    return NoiseStatistics(
        rows=len(idx), changed=int(np.sum(clean != noisy)), confusion=confusion
    )

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
Points on the probability simplex: exhaustive lattices and random draws.
"""
import itertools
from typing import Optional

import numpy as np
from scipy.special import comb

DEFAULT_LATTICE_CAP = 2_000_000


class LatticeTooLarge(ValueError):
    def __init__(self, K: int, denominator: int, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(
            f"The simplex lattice with K={K} and denominator {denominator} has {count} points, exceeding the cap of {cap}."
        )


def lattice_size(K: int, denominator: int) -> int:
    """
    The number of compositions of ``denominator`` into ``K`` non-negative
    parts, i.e. ``C(denominator + K - 1, K - 1)``.
    """
    return int(comb(denominator + K - 1, K - 1, exact=True))


def simplex_lattice(
    K: int,
    denominator: int,
    cap: int = DEFAULT_LATTICE_CAP,
) -> np.ndarray:
    """
    Enumerates every point of ``Δ^{K-1}`` whose coordinates are multiples of
    ``1/denominator``.

    Compositions are generated by choosing the ``K-1`` bar positions among
    ``denominator + K - 1`` slots (stars and bars). Vertices and the
    barycenter (when ``K`` divides ``denominator``) are always included.

    :returns: An array of shape ``(lattice_size(K, denominator), K)``.
    :raises LatticeTooLarge: When the point count exceeds ``cap``.
    """
    if K < 2:
        raise ValueError(f"K must be at least 2, got {K}")
    if denominator < 1:
        raise ValueError(f"denominator must be at least 1, got {denominator}")
    count = lattice_size(K, denominator)
    if count > cap:
        raise LatticeTooLarge(K, denominator, count, cap)

    slots = denominator + K - 1
    bars = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(slots), K - 1)),
        dtype=np.int64,
        count=count * (K - 1),
    ).reshape(count, K - 1)
    padded = np.concatenate(
        [np.full((count, 1), -1), bars, np.full((count, 1), slots)], axis=1
    )
    parts = np.diff(padded, axis=1) - 1
    return parts / denominator


def random_simplex(
    rng: np.random.Generator,
    n_samples: int,
    K: int,
    min_entry: Optional[float] = None,
) -> np.ndarray:
    """
    Draws ``n_samples`` points uniformly from ``Δ^{K-1}`` through normalized
    exponentials (the flat Dirichlet).

    :param min_entry: If given, points are drawn uniformly from the
        sub-simplex where every coordinate is at least ``min_entry``.
    """
    g = rng.exponential(scale=1.0, size=(n_samples, K))
    p = g / g.sum(axis=1, keepdims=True)
    if min_entry is None:
        return p
    if not (0 <= min_entry * K < 1):
        raise ValueError(f"min_entry {min_entry} leaves no room on a simplex with K={K}")
    return min_entry + (1.0 - K * min_entry) * p


def random_logits(
    rng: np.random.Generator,
    n_samples: int,
    K: int,
    scale: float = 2.0,
) -> np.ndarray:
    return rng.normal(scale=scale, size=(n_samples, K))

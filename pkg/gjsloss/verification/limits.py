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
from enum import Enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..common import derive_seed
from ..core import random_simplex
from ..losses import LossKind, LossSpec, loss_values

DEFAULT_MIN_ENTRY = 0.1


class LimitKind(str, Enum):
    CE_LIMIT = "CE-limit"
    MAE_LIMIT = "MAE-limit"
    GJS_MAE_LIMIT = "GJS-MAE-limit"

    def __str__(self) -> str:
        return self.value


CE_LADDER = (1e-1, 1e-2, 1e-3, 1e-4)
MAE_LADDER = (0.9, 0.99, 0.999, 0.9999, 1 - 1e-6)

# The leading-order MAE deviation is ((1-p_y) + p_y ln p_y)/|ln(1-π₁)|; over
# p_y ∈ [0.1, 0.9] its numerator peaks at 0.9 + 0.1 ln 0.1 ≈ 0.6697.
MAE_DEVIATION_COEFFICIENT = 0.7


@dataclass
class LimitProbeReport:
    """
    :param rungs: ``(π₁, max deviation)`` for each rung of the ladder.
    :param monotone: Whether the deviations never increase along the ladder.
    """

    kind: LimitKind
    K: int
    M: int
    trials: int
    rungs: List[Tuple[float, float]]

    @property
    def monotone(self) -> bool:
        deviations = [d for _, d in self.rungs]
        return all(b <= a for a, b in zip(deviations, deviations[1:]))

    @property
    def worst_increase(self) -> float:
        deviations = [d for _, d in self.rungs]
        return max((b - a for a, b in zip(deviations, deviations[1:])), default=0.0)

    @property
    def final_deviation(self) -> float:
        return self.rungs[-1][1]


def mae_limit_threshold(pi1: float, M: int = 2) -> float:
    """
    The deviation allowed between the normalized JS/GJS loss and its MAE
    limit at ``π₁``, for predictions with every entry at least ``0.1``. The
    consistency term of GJS adds at most ``ln(M-1)`` to the numerator.
    """
    return (MAE_DEVIATION_COEFFICIENT + math.log(M - 1)) / abs(math.log1p(-pi1))


def limit_deviation(
    kind: LimitKind,
    pi1: float,
    labels: np.ndarray,
    probs: np.ndarray,
) -> np.ndarray:
    """
    The per-sample deviation of the normalized loss at ``π₁`` from its limit.

    :param probs: Shape ``(B, K)`` for the JS limits, ``(B, M-1, K)`` for the
        GJS limit.
    """
    kind = LimitKind(kind)
    rows = np.arange(labels.shape[0])
    if kind == LimitKind.GJS_MAE_LIMIT:
        spec = LossSpec(LossKind.GJS, pi1=pi1, M=probs.shape[1] + 1)
        value = loss_values(spec, labels, probs)
        mean_pred = probs.mean(axis=1)
        return np.abs(value - (1.0 - mean_pred[rows, labels]))

    value = loss_values(LossSpec(LossKind.JS, pi1=pi1), labels, probs[:, None, :])
    p_y = probs[rows, labels]
    if kind == LimitKind.CE_LIMIT:
        ce = -np.log(p_y)
        return np.where(ce > 0, np.abs(value - ce) / np.where(ce > 0, ce, 1.0), np.abs(value))
    return np.abs(value - (1.0 - p_y))


def limit_convergence_probe(
    kind: LimitKind,
    pi1_ladder: Optional[Sequence[float]] = None,
    trials: int = 10_000,
    K: int = 5,
    M: int = 3,
    seed: int = 0,
    min_entry: float = DEFAULT_MIN_ENTRY,
) -> LimitProbeReport:
    """
    Measures how fast the normalized JS loss approaches cross entropy as
    ``π₁ → 0`` and MAE as ``π₁ → 1``, and how fast GJS approaches MAE on the
    mean prediction.

    Every rung reuses the same ``trials`` random ``(y, p)`` draws, with every
    entry of ``p`` at least ``min_entry``, so rungs differ only in ``π₁``.
    The CE deviation is relative, the MAE deviations absolute.

    :param pi1_ladder: Sorted toward the limit point. Defaults to
        :data:`CE_LADDER` or :data:`MAE_LADDER`.
    :param M: The number of distributions for the GJS limit.
    """
    kind = LimitKind(kind)
    if pi1_ladder is None:
        pi1_ladder = CE_LADDER if kind == LimitKind.CE_LIMIT else MAE_LADDER
    ladder = [float(pi1) for pi1 in pi1_ladder]
    toward_zero = kind == LimitKind.CE_LIMIT
    if any((b >= a) if toward_zero else (b <= a) for a, b in zip(ladder, ladder[1:])):
        raise ValueError(
            f"the {kind} ladder must be sorted toward π₁ = {0 if toward_zero else 1}: {ladder}"
        )

    rng = np.random.default_rng(derive_seed(seed, "limit-probe"))
    labels = rng.integers(0, K, size=trials)
    multi_view = kind == LimitKind.GJS_MAE_LIMIT
    n = M - 1 if multi_view else 1
    probs = random_simplex(rng, trials * n, K, min_entry=min_entry)
    if multi_view:
        probs = probs.reshape(trials, n, K)

    rungs = [
        (pi1, float(np.max(limit_deviation(kind, pi1, labels, probs)))) for pi1 in ladder
    ]
    return LimitProbeReport(kind=kind, K=K, M=M if multi_view else 2, trials=trials, rungs=rungs)

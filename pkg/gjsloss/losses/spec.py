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
from dataclasses import dataclass, replace

import numpy as np

from ..core import DivergenceKind, gjs_weights, is_bounded


class InvalidLossSpec(ValueError):
    pass


class LossKind(str, Enum):
    JS = "JS"
    GJS = "GJS"
    JS_ON_MEAN = "JS-on-mean"
    CE = "CE"
    MAE = "MAE"
    GCE = "GCE"
    LS = "LS"
    BS = "BS"
    KL = "KL"
    KL_REVERSE = "KL-reverse"
    JEFFREYS = "Jeffreys"
    K = "K"
    K_PRIME = "K-prime"

    def __str__(self) -> str:
        return self.value

    @property
    def multi_view(self) -> bool:
        """
        Whether the loss consumes ``M-1`` predictions rather than one.
        """
        return self in (LossKind.GJS, LossKind.JS_ON_MEAN)

    @property
    def divergence_based(self) -> bool:
        """
        Whether the loss is divided by the normalizer ``Z``.
        """
        return self in (LossKind.JS, LossKind.GJS, LossKind.JS_ON_MEAN)

    @property
    def dissection(self) -> bool:
        return self in (
            LossKind.KL,
            LossKind.KL_REVERSE,
            LossKind.JEFFREYS,
            LossKind.K,
            LossKind.K_PRIME,
        )

    @property
    def bounded(self) -> bool:
        """
        Whether ``Σ_k L(e_k, f(x))`` stays finite over the whole simplex without
        relying on the probability floor.
        """
        if self.dissection:
            return is_bounded(DivergenceKind(self.value))
        return self in (
            LossKind.JS,
            LossKind.GJS,
            LossKind.JS_ON_MEAN,
            LossKind.MAE,
            LossKind.GCE,
        )


class ZMode(str, Enum):
    NORMALIZED = "normalized"
    UNIT = "unit"

    def __str__(self) -> str:
        return self.value


def normalizer(pi1: float, z_mode: ZMode = ZMode.NORMALIZED) -> float:
    """
    ``Z = -(1-π₁) ln(1-π₁)`` in normalized mode, ``1`` in unit mode.
    """
    if ZMode(z_mode) == ZMode.UNIT:
        return 1.0
    return -(1.0 - pi1) * math.log1p(-pi1)


@dataclass(frozen=True)
class LossSpec:
    """
    A loss variant and its hyperparameters. Only the fields relevant to
    ``kind`` are consumed.

    :param kind: The loss.
    :param pi1: Weight of the label distribution, in ``(0, 1)``.
    :param M: Number of distributions for ``GJS``/``JS-on-mean``; the loss
        consumes ``M-1`` predictions.
    :param z_mode: Whether divergence losses are divided by
        ``Z = -(1-π₁) ln(1-π₁)`` or by one.
    :param q: The ``GCE`` exponent, in ``(0, 1]``.
    :param epsilon_ls: The ``LS`` mass moved to the uniform distribution, in
        ``[0, 1)``.
    :param beta_bs: The ``BS`` weight of the label, in ``(0, 1]``.
    """

    kind: LossKind
    pi1: float = 0.5
    M: int = 2
    z_mode: ZMode = ZMode.NORMALIZED
    q: float = 0.7
    epsilon_ls: float = 0.1
    beta_bs: float = 0.8

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", LossKind(self.kind))
            object.__setattr__(self, "z_mode", ZMode(self.z_mode))
        except ValueError as e:
            raise InvalidLossSpec(str(e)) from None
        for name in ("pi1", "q", "epsilon_ls", "beta_bs"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidLossSpec(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if int(self.M) != self.M:
            raise InvalidLossSpec(f"M must be an integer, got {self.M}")
        object.__setattr__(self, "M", int(self.M))

        if not (0.0 < self.pi1 < 1.0):
            raise InvalidLossSpec(f"pi1 must lie in (0, 1), got {self.pi1}")
        if self.M < 2:
            raise InvalidLossSpec(f"M must be at least 2, got {self.M}")
        if self.kind == LossKind.JS and self.M != 2:
            raise InvalidLossSpec(f"JS compares two distributions, got M={self.M}")
        if self.kind == LossKind.JS_ON_MEAN and self.M < 3:
            raise InvalidLossSpec(f"JS-on-mean needs M ≥ 3, got M={self.M}")
        if not (0.0 < self.q <= 1.0):
            raise InvalidLossSpec(f"q must lie in (0, 1], got {self.q}")
        if not (0.0 <= self.epsilon_ls < 1.0):
            raise InvalidLossSpec(f"epsilon_ls must lie in [0, 1), got {self.epsilon_ls}")
        if not (0.0 < self.beta_bs <= 1.0):
            raise InvalidLossSpec(f"beta_bs must lie in (0, 1], got {self.beta_bs}")

    @property
    def num_preds(self) -> int:
        return self.M - 1 if self.kind.multi_view else 1

    @property
    def Z(self) -> float:
        if not self.kind.divergence_based:
            return 1.0
        return normalizer(self.pi1, self.z_mode)

    @property
    def weights(self) -> np.ndarray:
        """
        ``[π₁, π₂, …, π_M]`` with equal prediction weights.
        """
        M = self.M if self.kind.multi_view else 2
        return gjs_weights(self.pi1, M)

    def with_kind(self, kind: LossKind, **changes) -> "LossSpec":
        return replace(self, kind=kind, **changes)

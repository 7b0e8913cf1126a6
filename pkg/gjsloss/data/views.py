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
from dataclasses import dataclass

import numpy as np


class InvalidViewSpec(ValueError):
    pass


@dataclass(frozen=True)
class ViewSpec:
    """
    The stochastic augmentation ``A(x)``: additive Gaussian jitter followed by
    random feature masking.

    :param num_views: Views drawn per input, ``M-1`` for multi-view losses.
    :param jitter_sigma: Standard deviation of the additive noise.
    :param mask_prob: Probability of zeroing each feature.
    """

    num_views: int = 1
    jitter_sigma: float = 0.0
    mask_prob: float = 0.0

    def __post_init__(self):
        if int(self.num_views) != self.num_views or self.num_views < 1:
            raise InvalidViewSpec(f"num_views must be a positive integer, got {self.num_views}")
        if not (self.jitter_sigma >= 0):
            raise InvalidViewSpec(f"jitter_sigma must be non-negative, got {self.jitter_sigma}")
        if not (0 <= self.mask_prob < 1):
            raise InvalidViewSpec(f"mask_prob must lie in [0, 1), got {self.mask_prob}")
        object.__setattr__(self, "num_views", int(self.num_views))
        object.__setattr__(self, "jitter_sigma", float(self.jitter_sigma))
        object.__setattr__(self, "mask_prob", float(self.mask_prob))

    @property
    def identity(self) -> bool:
        return self.jitter_sigma == 0 and self.mask_prob == 0

    def with_views(self, num_views: int) -> "ViewSpec":
        return ViewSpec(num_views, self.jitter_sigma, self.mask_prob)


def make_views_batch(
    features: np.ndarray,
    vs: ViewSpec,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    :param features: Shape ``(B, D)``.
    :returns: Shape ``(B, vs.num_views, D)``. The identity augmentation
        returns copies and draws nothing from ``rng``.
    """
    features = np.asarray(features, dtype=np.float64)
    views = np.repeat(features[:, None, :], vs.num_views, axis=1)
    if vs.jitter_sigma > 0:
        views += vs.jitter_sigma * rng.standard_normal(views.shape)
    if vs.mask_prob > 0:
        views *= rng.random(views.shape) >= vs.mask_prob
    return views


def make_views(x: np.ndarray, vs: ViewSpec, rng: np.random.Generator) -> np.ndarray:
    """
    :param x: One feature row.
    :returns: ``vs.num_views`` perturbed copies of ``x``, one per row.
    """
    return make_views_batch(np.asarray(x)[None, :], vs, rng)[0]

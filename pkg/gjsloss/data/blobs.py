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

import numpy as np

from .dataset import Dataset, InvalidDataset
from ..common import derive_seed

DEFAULT_RADIUS = 4.0


def blob_centers(K: int, dim: int, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """
    ``K`` points evenly spaced on a circle of ``radius`` in the first two
    coordinates; the remaining coordinates are zero.
    """
    angles = 2.0 * math.pi * np.arange(K) / K
    centers = np.zeros((K, dim))
    centers[:, 0] = radius * np.cos(angles)
    centers[:, 1] = radius * np.sin(angles)
    return centers


def gen_blobs(
    K: int,
    n_per_class: int,
    dim: int = 2,
    spread: float = 1.0,
    seed: int = 0,
    radius: float = DEFAULT_RADIUS,
) -> Dataset:
    """
    Generates ``K`` isotropic Gaussian clusters of ``n_per_class`` points with
    standard deviation ``spread`` around :func:`blob_centers`. Rows are
    shuffled, and the result depends only on the arguments.
    """
    if K < 2:
        raise InvalidDataset(f"K must be at least 2, got {K}")
    if n_per_class < 1:
        raise InvalidDataset(f"n_per_class must be positive, got {n_per_class}")
    if dim < 2:
        raise InvalidDataset(f"dim must be at least 2, got {dim}")
    if spread < 0 or not math.isfinite(spread):
        raise InvalidDataset(f"spread must be a non-negative real, got {spread}")

    rng = np.random.default_rng(derive_seed(seed, "blobs"))
    labels = np.repeat(np.arange(K), n_per_class)
    features = blob_centers(K, dim, radius)[labels]
    features = features + spread * rng.standard_normal(features.shape)
    order = rng.permutation(labels.shape[0])
    return Dataset(
        features=features[order],
        labels=labels[order],
        clean_labels=labels[order],
        K=K,
        provenance={
            "source": "blobs",
            "K": K,
            "n_per_class": n_per_class,
            "dim": dim,
            "spread": spread,
            "radius": radius,
            "seed": seed,
        },
    )

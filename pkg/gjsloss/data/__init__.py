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
The Data Module
---------------

Datasets, label noise, the stochastic view pipeline, and the
validation/test split.
"""
from .dataset import Dataset, Split, InvalidDataset
from .noise import (
    InvalidNoiseSpec,
    NoiseKind,
    NoiseSpec,
    NoiseStatistics,
    transition_matrix,
    expected_changed_fraction,
    inject_noise,
    noise_statistics,
)
from .blobs import gen_blobs, blob_centers
from .cifar import (
    TruncatedFile,
    InvalidLabel,
    load_cifar10_binary,
    write_cifar10_binary,
)
from .views import InvalidViewSpec, ViewSpec, make_views, make_views_batch
from .split import InvalidSplit, split, split_sizes
from .container import save_dataset, load_dataset

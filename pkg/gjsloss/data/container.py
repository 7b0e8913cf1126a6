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
A self-describing dataset container: one ``.npz`` archive holding the arrays
plus a JSON provenance record.
"""
import json
import os

import numpy as np

from .dataset import Dataset, InvalidDataset
from .noise import NoiseSpec
from ..common import AnyPath, dumps_json
from ..__version__ import __version__

CONTAINER_FORMAT = "gjsloss-dataset/1"
_ARRAYS = ("features", "labels", "clean_labels", "splits")


def save_dataset(ds: Dataset, path: AnyPath):
    """
    Writes ``ds`` to ``path``. The provenance record carries the dataset's
    own provenance, its ``K`` and its :class:`NoiseSpec`.
    """
    provenance = {
        "format": CONTAINER_FORMAT,
        "gjsloss_version": __version__,
        "K": ds.K,
        "noise": None if ds.noise is None else ds.noise.to_dict(),
        "provenance": ds.provenance,
    }
    with open(os.fspath(path), "wb") as f:
        np.savez_compressed(
            f,
            features=ds.features,
            labels=ds.labels,
            clean_labels=ds.clean_labels,
            splits=ds.splits,
            provenance=np.array(dumps_json(provenance)),
        )


def load_dataset(path: AnyPath) -> Dataset:
    """
    :raises InvalidDataset: If the archive is not a dataset container.
    """
    with np.load(os.fspath(path), allow_pickle=False) as archive:
        missing = [name for name in _ARRAYS + ("provenance",) if name not in archive]
        if len(missing):
            raise InvalidDataset(f"'{path}' is missing {', '.join(missing)}")
        record = json.loads(str(archive["provenance"]))
        if record.get("format") != CONTAINER_FORMAT:
            raise InvalidDataset(
                f"'{path}' has format {record.get('format')!r}, expected {CONTAINER_FORMAT!r}"
            )
        arrays = {name: archive[name] for name in _ARRAYS}
    noise = record.get("noise")
    return Dataset(
        K=int(record["K"]),
        noise=None if noise is None else NoiseSpec.from_dict(noise),
        provenance=record.get("provenance") or {},
        **arrays,
    )

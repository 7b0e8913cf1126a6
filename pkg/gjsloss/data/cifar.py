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
The CIFAR-10 binary layout: fixed 3073-byte records, one label byte (0-9)
followed by 1024 red, 1024 green and 1024 blue bytes of a row-major 32×32
image.
"""
import os
from typing import Sequence

import numpy as np

from .dataset import Dataset, InvalidDataset
from ..common import AnyPath
from ..logging import verbose

IMAGE_SIZE = 32
CHANNELS = 3
PIXELS = CHANNELS * IMAGE_SIZE * IMAGE_SIZE
RECORD_SIZE = 1 + PIXELS
NUM_CLASSES = 10


class TruncatedFile(InvalidDataset):
    def __init__(self, path: AnyPath, size: int) -> None:
        self.path = path
        self.size = size
        super().__init__(
            f"'{path}' holds {size} bytes, which is not a positive multiple of the {RECORD_SIZE}-byte record size"
        )


class InvalidLabel(InvalidDataset):
    def __init__(self, path: AnyPath, record: int, label: int) -> None:
        self.path = path
        self.record = record
        self.label = label
        super().__init__(
            f"record {record} of '{path}' has label byte {label}, expected 0-{NUM_CLASSES - 1}"
        )


def read_records(path: AnyPath) -> np.ndarray:
    """
    :returns: The raw records of one file, shape ``(n, 3073)``, ``uint8``.
    """
    raw = np.fromfile(os.fspath(path), dtype=np.uint8)
    if raw.size == 0 or raw.size % RECORD_SIZE != 0:
        raise TruncatedFile(path, raw.size)
    records = raw.reshape(-1, RECORD_SIZE)
    bad = np.flatnonzero(records[:, 0] >= NUM_CLASSES)
    if len(bad):
        raise InvalidLabel(path, int(bad[0]), int(records[bad[0], 0]))
    return records


def normalize_channels(pixels: np.ndarray) -> np.ndarray:
    """
    Standardizes each color plane to zero mean and unit variance over the
    whole set. Constant planes are only centered.
    """
    planes = pixels.reshape(pixels.shape[0], CHANNELS, -1)
    mean = planes.mean(axis=(0, 2), keepdims=True)
    std = planes.std(axis=(0, 2), keepdims=True)
    std[std == 0] = 1.0
    return ((planes - mean) / std).reshape(pixels.shape[0], PIXELS)


def load_cifar10_binary(paths: Sequence[AnyPath], normalize: bool = True) -> Dataset:
    """
    Concatenates the records of ``paths`` in order.

    :param normalize: Apply :func:`normalize_channels` after scaling the
        pixels to ``[0, 1]``.
    :raises TruncatedFile: If a file is empty or not a whole number of
        records.
    :raises InvalidLabel: If a label byte exceeds 9.
    """
    if len(paths) == 0:
        raise InvalidDataset("no CIFAR-10 files given")
    records = np.concatenate([read_records(path) for path in paths])
    labels = records[:, 0].astype(np.int64)
    pixels = records[:, 1:].astype(np.float64) / 255.0
    if normalize:
        pixels = normalize_channels(pixels)
    verbose(f"Loaded {records.shape[0]} CIFAR-10 records from {len(paths)} file(s).")
    return Dataset(
        features=pixels,
        labels=labels,
        clean_labels=labels,
        K=NUM_CLASSES,
        provenance={
            "source": "cifar10-binary",
            "paths": [os.fspath(path) for path in paths],
            "normalized": normalize,
        },
    )


def write_cifar10_binary(path: AnyPath, labels: np.ndarray, pixels: np.ndarray):
    """
    Writes records in the CIFAR-10 binary layout.

    :param pixels: ``uint8`` values, shape ``(n, 3072)`` with the planes in
        red, green, blue order.
    """
    labels = np.asarray(labels, dtype=np.uint8).reshape(-1, 1)
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.shape != (labels.shape[0], PIXELS):
        raise InvalidDataset(
            f"expected pixels of shape ({labels.shape[0]}, {PIXELS}), got {pixels.shape}"
        )
    np.concatenate([labels, pixels], axis=1).tofile(os.fspath(path))

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
import csv
import json
import math
from dataclasses import asdict, dataclass
from typing import IO, Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import pearsonr

from .model import MlpModel
from ..common import AnyPath, derive_seed, dumps_json
from ..data import ViewSpec, make_views_batch

CSV_COLUMNS = (
    "epoch",
    "train_loss",
    "train_acc_noisy",
    "train_acc_clean",
    "val_acc",
    "consistency",
    "seconds",
)


@dataclass
class MetricsRecord:
    """
    One epoch of training.

    :param train_loss: The mean training loss over the epoch's batches,
        weighted by batch size.
    :param train_acc_noisy: Training accuracy against the (noisy) training
        labels.
    :param train_acc_clean: Training accuracy against the clean labels.
    :param val_acc: Accuracy on the clean validation rows.
    :param consistency: :func:`consistency_rate` on the training rows.
    :param seconds: Wall time of the epoch.
    :param test_acc: Accuracy on the clean test rows, if there are any.
    """

    epoch: int
    train_loss: float
    train_acc_noisy: float
    train_acc_clean: float
    val_acc: float
    consistency: float
    seconds: float
    lr: float = 0.0
    test_acc: Optional[float] = None

    def csv_row(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in CSV_COLUMNS}

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def evaluate(model: MlpModel, features: np.ndarray, labels: np.ndarray) -> float:
    """
    Top-1 accuracy; ties go to the lowest class index. ``0.0`` for no rows.
    """
    if len(labels) == 0:
        return 0.0
    return float(np.mean(model.predict(features) == labels))


def consistency_rate(
    model: MlpModel,
    features: np.ndarray,
    vs: ViewSpec,
    seed: int = 0,
) -> float:
    """
    The fraction of rows whose top-1 class on the unaugmented input equals
    the top-1 class on one fresh view.
    """
    if features.shape[0] == 0:
        return 1.0
    rng = np.random.default_rng(derive_seed(seed, "consistency"))
    views = make_views_batch(features, vs.with_views(1), rng)[:, 0, :]
    return float(np.mean(model.predict(features) == model.predict(views)))


def peak_epoch(records: Sequence[MetricsRecord]) -> int:
    """
    The index of the record with the best validation accuracy; ties go to the
    earliest.
    """
    return int(np.argmax([r.val_acc for r in records]))


def post_peak_correlation(records: Sequence[MetricsRecord]) -> float:
    """
    The Pearson correlation between consistency and validation accuracy over
    the epochs from the validation peak onwards. ``nan`` when fewer than
    three epochs remain or either series is constant.
    """
    tail = records[peak_epoch(records) :]
    if len(tail) < 3:
        return math.nan
    consistency = np.array([r.consistency for r in tail])
    accuracy = np.array([r.val_acc for r in tail])
    if np.ptp(consistency) == 0 or np.ptp(accuracy) == 0:
        return math.nan
    return float(pearsonr(consistency, accuracy)[0])


class MetricsWriter(object):
    """
    Appends records to a CSV file with :data:`CSV_COLUMNS` and to a JSON
    lines stream. Use as a context manager.
    """

    def __init__(self, csv_path: AnyPath, jsonl_path: AnyPath) -> None:
        self.csv_path = csv_path
        self.jsonl_path = jsonl_path
        self.__csv: Optional[IO[str]] = None
        self.__jsonl: Optional[IO[str]] = None
        self.__writer: Optional[csv.DictWriter] = None
        self.records: List[MetricsRecord] = []

    def __enter__(self) -> "MetricsWriter":
        self.__csv = open(self.csv_path, "w", encoding="utf8", newline="")
        self.__jsonl = open(self.jsonl_path, "w", encoding="utf8")
        self.__writer = csv.DictWriter(self.__csv, fieldnames=CSV_COLUMNS)
        self.__writer.writeheader()
        return self

    def __exit__(self, *_):
        for f in (self.__csv, self.__jsonl):
            if f is not None:
                f.close()
        self.__csv = self.__jsonl = None
        self.__writer = None

    def write(self, record: MetricsRecord):
        if self.__writer is None or self.__csv is None or self.__jsonl is None:
            raise RuntimeError("MetricsWriter.write() called outside of its context")
        self.__writer.writerow(record.csv_row())
        self.__csv.flush()
        self.__jsonl.write(dumps_json(record.to_dict(), indent=None) + "\n")
        self.__jsonl.flush()
        self.records.append(record)


def read_metrics_jsonl(path: AnyPath) -> List[MetricsRecord]:
    with open(path, encoding="utf8") as f:
        return [MetricsRecord(**json.loads(line)) for line in f if line.strip()]

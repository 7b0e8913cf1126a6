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
One-axis ablations: the same experiment repeated over a list of values for
a single hyperparameter, with every other setting and seed shared.
"""
import os
import csv
import datetime
from enum import Enum
from decimal import Decimal
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from .experiment import ExperimentException, run_experiment
from ..common import AnyPath, mkdirp
from ..common.misc import _get_process_limit
from ..config import DatasetKind, ExperimentConfig
from ..data.cifar import NUM_CLASSES
from ..logging import info, options, rule, success, warn

SWEEP_SUMMARY = "summary.csv"
SUMMARY_COLUMNS = [
    "axis",
    "value",
    "run",
    "final_val_acc",
    "best_val_acc",
    "peak_epoch",
    "final_test_acc",
    "final_train_acc_clean",
]


class SweepAxis(str, Enum):
    PI1 = "pi1"
    M = "M"
    ETA = "eta"
    JITTER = "jitter"

    def __str__(self) -> str:
        return self.value

    @property
    def variable(self) -> str:
        return {
            SweepAxis.PI1: "PI1",
            SweepAxis.M: "M",
            SweepAxis.ETA: "NOISE_ETA",
            SweepAxis.JITTER: "JITTER_SIGMA",
        }[self]

    def parse(self, value: Union[str, int, float]) -> Union[int, Decimal]:
        try:
            if self == SweepAxis.M:
                return int(value)
            return Decimal(str(value))
        except (ValueError, ArithmeticError):
            raise ExperimentException(f"'{value}' is not a valid value for the {self} axis")


@dataclass
class SweepPoint:
    axis: SweepAxis
    value: Union[int, Decimal]
    tag: str

    @property
    def overrides(self) -> Dict[str, Any]:
        return {self.axis.variable: self.value}


@dataclass
class SweepResult:
    sweep_dir: str
    rows: List[Dict[str, Any]]


def _known_classes(exp: ExperimentConfig) -> Optional[int]:
    if exp.dataset.kind == DatasetKind.BLOBS:
        return exp.dataset.classes
    elif exp.dataset.kind == DatasetKind.CIFAR10:
        return NUM_CLASSES
    return None


def plan_sweep(
    config_in: Union[AnyPath, Mapping[str, Any]],
    axis: SweepAxis,
    values: Sequence[Union[str, int, float]],
) -> List[SweepPoint]:
    """
    Validates every point of a sweep before any of them runs.

    :raises ExperimentException: If the axis does not apply to the configured
        loss or no values are given.
    :raises InvalidConfig: If any point yields an invalid configuration, e.g.
        ``η ≥ 1``.
    """
    axis = SweepAxis(axis)
    if len(values) == 0:
        raise ExperimentException("a sweep needs at least one value")
    base = ExperimentConfig.load(config_in)
    kind = base.loss.kind
    if axis == SweepAxis.M and not kind.multi_view:
        raise ExperimentException(f"M sweeps require a multi-view loss (GJS or JS-on-mean), got {kind}")
    if axis == SweepAxis.PI1 and not kind.divergence_based:
        raise ExperimentException(f"π₁ sweeps require JS, GJS or JS-on-mean, got {kind}")

    points = []
    for raw in values:
        value = axis.parse(raw)
        point = SweepPoint(axis, value, f"{axis}-{value}")
        exp = ExperimentConfig.load(config_in, overrides=point.overrides)
        K = _known_classes(exp)
        if axis == SweepAxis.M and K is not None and exp.loss.M > K + 1:
            warn(
                f"M={exp.loss.M} exceeds K+1={K + 1}: the bounds no longer apply, but training proceeds."
            )
        points.append(point)
    return points


def _run_point(
    config_in: Union[str, Dict[str, Any]],
    point: SweepPoint,
    sweep_dir: str,
    show_progress_bar: bool,
) -> Dict[str, Any]:
    options.set_show_progress_bar(show_progress_bar)
    rule(point.tag)
    exp = ExperimentConfig.load(config_in, overrides={**point.overrides, "OUTPUT_DIR": sweep_dir})
    result = run_experiment(exp, tag=point.tag)
    records = result.records
    final = records[-1] if records else None
    return {
        "axis": point.axis.value,
        "value": point.value,
        "run": point.tag,
        "final_val_acc": final.val_acc if final else None,
        "best_val_acc": result.best_val_acc if records else None,
        "peak_epoch": result.manifest["metrics"].get("peak_epoch"),
        "final_test_acc": final.test_acc if final else None,
        "final_train_acc_clean": final.train_acc_clean if final else None,
    }


def run_sweep(
    config_in: Union[AnyPath, Mapping[str, Any]],
    axis: SweepAxis,
    values: Sequence[Union[str, int, float]],
    jobs: int = 1,
    tag: Union[str, None] = None,
) -> SweepResult:
    """
    Runs one experiment per value into ``OUTPUT_DIR/<tag>/<axis>-<value>``
    and writes ``summary.csv`` with the final and best validation accuracy
    of each, in the order the values were given.

    :param jobs: Points run in this many worker processes, capped by
        ``GJSLOSS_MAX_WORKERS``. Each point is deterministic on its own.
    :returns: The sweep directory and its summary rows.
    """
    axis = SweepAxis(axis)
    points = plan_sweep(config_in, axis, values)
    base = ExperimentConfig.load(config_in)
    tag = tag or datetime.datetime.now().astimezone().strftime("SWEEP_%Y-%m-%d_%H-%M-%S")
    sweep_dir = os.path.abspath(os.path.join(base.output_dir, tag))
    mkdirp(sweep_dir)
    source: Union[str, Dict[str, Any]] = (
        dict(config_in) if isinstance(config_in, Mapping) else os.path.abspath(str(config_in))
    )

    jobs = max(1, min(jobs, _get_process_limit(), len(points)))
    info(f"Sweeping {axis} over {len(points)} value(s) with {jobs} job(s) into '{sweep_dir}'.")
    if jobs == 1:
        rows = [
            _run_point(source, point, sweep_dir, options.get_show_progress_bar())
            for point in points
        ]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [
                executor.submit(_run_point, source, point, sweep_dir, False)
                for point in points
            ]
            rows = [future.result() for future in futures]

    summary_path = os.path.join(sweep_dir, SWEEP_SUMMARY)
    with open(summary_path, "w", encoding="utf8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    success(f"Sweep summary written to '{summary_path}'.")
    return SweepResult(sweep_dir, rows)

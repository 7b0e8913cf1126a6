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
The noisy-label comparison: several losses trained on one seeded setting,
summarized by how far each falls from its own peak and checked against the
qualitative orderings bounded losses are expected to show.
"""
import os
import math
import time
import datetime
from dataclasses import dataclass, asdict
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from .experiment import ExperimentException, run_experiment
from ..common import AnyPath, dumps_json, get_gjsloss_root, mkdirp
from ..common.misc import _get_process_limit
from ..config import ExperimentConfig
from ..logging import info, options, rule, success, warn
from ..training import MetricsRecord, post_peak_correlation

CALIBRATION = "calibration.json"
BENCHMARK_CONFIG = os.path.join(get_gjsloss_root(), "examples", "benchmark_noisy_blobs.yaml")

BENCHMARK_LOSSES: Dict[str, Dict[str, Any]] = {
    "CE": {"LOSS_KIND": "CE"},
    "GJS": {"LOSS_KIND": "GJS", "PI1": 0.5, "M": 3},
    "JS": {"LOSS_KIND": "JS", "PI1": 0.5},
    "JS-on-mean": {"LOSS_KIND": "JS-on-mean", "PI1": 0.5, "M": 3},
    "KL": {"LOSS_KIND": "KL"},
    "Jeffreys": {"LOSS_KIND": "Jeffreys"},
}

# Accuracy points, as fractions.
OVERFIT_DROP = 0.05
STABLE_DROP = 0.02
GJS_MARGIN = 0.05
CONSISTENCY_CORRELATION = 0.5


@dataclass
class BenchmarkEntry:
    name: str
    run: str
    peak_test_acc: float
    final_test_acc: float
    peak_epoch: int
    post_peak_correlation: float
    seconds: float

    @property
    def drop(self) -> float:
        return self.peak_test_acc - self.final_test_acc

    @classmethod
    def from_records(
        Self,
        name: str,
        run: str,
        records: Sequence[MetricsRecord],
        seconds: float,
    ) -> "BenchmarkEntry":
        """
        :raises ExperimentException: If the run has no epochs or no test rows.
        """
        accuracies = [r.test_acc for r in records]
        if len(accuracies) == 0 or any(a is None for a in accuracies):
            raise ExperimentException(
                f"'{name}' has no test accuracy: the benchmark needs TEST_FRACTION > 0"
            )
        peak = max(range(len(accuracies)), key=lambda i: (accuracies[i], -i))
        return Self(
            name=name,
            run=run,
            peak_test_acc=float(accuracies[peak]),
            final_test_acc=float(accuracies[-1]),
            peak_epoch=peak,
            post_peak_correlation=post_peak_correlation(records),
            seconds=seconds,
        )

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["drop"] = self.drop
        if math.isnan(self.post_peak_correlation):
            d["post_peak_correlation"] = None
        return d


@dataclass
class AcceptanceCheck:
    id: str
    description: str
    observed: Optional[float]
    threshold: float
    passed: bool


@dataclass
class BenchmarkResult:
    benchmark_dir: str
    entries: Dict[str, BenchmarkEntry]
    checks: List[AcceptanceCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _at_least(id: str, description: str, observed: float, threshold: float) -> AcceptanceCheck:
    passed = not math.isnan(observed) and observed >= threshold
    return AcceptanceCheck(id, description, None if math.isnan(observed) else observed, threshold, passed)


def _at_most(id: str, description: str, observed: float, threshold: float) -> AcceptanceCheck:
    passed = not math.isnan(observed) and observed <= threshold
    return AcceptanceCheck(id, description, None if math.isnan(observed) else observed, threshold, passed)


def check_acceptance(entries: Mapping[str, BenchmarkEntry]) -> List[AcceptanceCheck]:
    """
    Checks the orderings for every pair of losses present in ``entries``;
    checks involving a missing loss are skipped.

    Accuracies are fractions, so a threshold of ``0.05`` is five points.
    """
    checks: List[AcceptanceCheck] = []
    ce = entries.get("CE")
    gjs = entries.get("GJS")
    if ce is not None:
        checks.append(
            _at_least("ce-overfits", "CE final test accuracy falls below its peak", ce.drop, OVERFIT_DROP)
        )
        r = ce.post_peak_correlation
        checks.append(
            AcceptanceCheck(
                "ce-consistency-correlation",
                "CE consistency tracks validation accuracy after the peak",
                None if math.isnan(r) else r,
                CONSISTENCY_CORRELATION,
                not math.isnan(r) and r > CONSISTENCY_CORRELATION,
            )
        )
    if gjs is not None:
        checks.append(
            _at_most("gjs-stable", "GJS final test accuracy stays near its peak", gjs.drop, STABLE_DROP)
        )
    if ce is not None and gjs is not None:
        checks.append(
            _at_least(
                "gjs-beats-ce",
                "GJS final test accuracy over CE final test accuracy",
                gjs.final_test_acc - ce.final_test_acc,
                GJS_MARGIN,
            )
        )
    for name in ["KL", "Jeffreys"]:
        if name in entries:
            checks.append(
                _at_least(
                    f"{name.lower()}-overfits",
                    f"{name} final test accuracy falls below its peak",
                    entries[name].drop,
                    OVERFIT_DROP,
                )
            )
    if "JS" in entries:
        checks.append(
            _at_most("js-stable", "JS final test accuracy stays near its peak", entries["JS"].drop, STABLE_DROP)
        )
    if gjs is not None and "JS-on-mean" in entries:
        checks.append(
            _at_least(
                "gjs-vs-js-on-mean",
                "GJS final test accuracy over JS-on-mean final test accuracy",
                gjs.final_test_acc - entries["JS-on-mean"].final_test_acc,
                0.0,
            )
        )
    return checks


def _run_loss(
    config_in: Union[str, Dict[str, Any]],
    name: str,
    benchmark_dir: str,
    show_progress_bar: bool,
) -> BenchmarkEntry:
    options.set_show_progress_bar(show_progress_bar)
    rule(name)
    exp = ExperimentConfig.load(
        config_in, overrides={**BENCHMARK_LOSSES[name], "OUTPUT_DIR": benchmark_dir}
    )
    start = time.perf_counter()
    result = run_experiment(exp, tag=name)
    return BenchmarkEntry.from_records(
        name, result.run_dir, result.records, time.perf_counter() - start
    )


def run_benchmark(
    config_in: Union[AnyPath, Mapping[str, Any]] = BENCHMARK_CONFIG,
    losses: Optional[Sequence[str]] = None,
    jobs: int = 1,
    tag: Optional[str] = None,
) -> BenchmarkResult:
    """
    Trains each loss of :data:`BENCHMARK_LOSSES` on the same setting into
    ``OUTPUT_DIR/<tag>/<loss>`` and writes ``calibration.json`` with the
    setting, the peak and final test accuracy of every loss, and the
    outcome of :func:`check_acceptance`.

    :param losses: A subset of :data:`BENCHMARK_LOSSES`, in running order.
    :raises ExperimentException: If a loss is unknown.
    """
    losses = list(losses or BENCHMARK_LOSSES)
    unknown = [name for name in losses if name not in BENCHMARK_LOSSES]
    if len(unknown) != 0:
        raise ExperimentException(
            f"unknown benchmark loss(es) {', '.join(unknown)}: pick from {', '.join(BENCHMARK_LOSSES)}"
        )
    # Validate every configuration before anything trains
    for name in losses:
        ExperimentConfig.load(config_in, overrides=BENCHMARK_LOSSES[name])

    base = ExperimentConfig.load(config_in)
    tag = tag or datetime.datetime.now().astimezone().strftime("BENCHMARK_%Y-%m-%d_%H-%M-%S")
    benchmark_dir = os.path.abspath(os.path.join(base.output_dir, tag))
    mkdirp(benchmark_dir)
    source: Union[str, Dict[str, Any]] = (
        dict(config_in) if isinstance(config_in, Mapping) else os.path.abspath(str(config_in))
    )

    jobs = max(1, min(jobs, _get_process_limit(), len(losses)))
    info(f"Benchmarking {len(losses)} loss(es) with {jobs} job(s) into '{benchmark_dir}'.")
    if jobs == 1:
        ordered = [
            _run_loss(source, name, benchmark_dir, options.get_show_progress_bar())
            for name in losses
        ]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [
                executor.submit(_run_loss, source, name, benchmark_dir, False)
                for name in losses
            ]
            ordered = [future.result() for future in futures]

    entries = {entry.name: entry for entry in ordered}
    checks = check_acceptance(entries)
    for check in checks:
        if not check.passed:
            warn(f"Check '{check.id}' failed: observed {check.observed}, threshold {check.threshold}.")

    calibration_path = os.path.join(benchmark_dir, CALIBRATION)
    with open(calibration_path, "w", encoding="utf8") as f:
        f.write(
            dumps_json(
                {
                    "setting": base.config,
                    "entries": {name: entry.to_dict() for name, entry in entries.items()},
                    "checks": [asdict(check) for check in checks],
                }
            )
        )
    success(f"Benchmark calibration written to '{calibration_path}'.")
    return BenchmarkResult(benchmark_dir, entries, checks)

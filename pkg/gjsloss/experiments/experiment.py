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
The lifecycle of a single training run: its run directory, log files,
metrics, manifest and progress bar.
"""
import os
import sys
import shutil
import logging
import datetime
import platform
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any, Dict, List, Optional

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)

from .resources import ResourceTracker
from ..__version__ import __version__
from ..common import dumps_json, mkdirp
from ..config import DatasetKind, ExperimentConfig, PER_EPOCH_STREAMS
from ..data import (
    Dataset,
    InvalidDataset,
    InvalidNoiseSpec,
    InvalidSplit,
    Split,
    expected_changed_fraction,
    gen_blobs,
    inject_noise,
    load_cifar10_binary,
    load_dataset,
    noise_statistics,
    split,
    split_sizes,
)
from ..logging import (
    LevelFilter,
    console,
    PlainFormatter,
    deregister_additional_handler,
    info,
    options,
    register_additional_handler,
    success,
    verbose,
    warn,
)
from ..training import (
    MetricsRecord,
    MetricsWriter,
    MlpModel,
    TrainingError,
    peak_epoch,
    post_peak_correlation,
    train_loop,
)

METRICS_CSV = "metrics.csv"
METRICS_JSONL = "metrics.jsonl"
MANIFEST = "manifest.json"
RESOLVED = "resolved.json"


class ExperimentError(RuntimeError):
    """
    A run that started but could not finish, e.g. because training diverged.
    """

    pass


class ExperimentException(ExperimentError):
    """
    A run that could not start: its data could not be read or does not fit
    the configuration.
    """

    pass


class TrainingProgressBar(object):
    """
    An epoch counter rendered at the bottom of interactive terminals.
    """

    def __init__(self, name: str, epochs: int) -> None:
        self.name = name
        self.epochs = epochs
        self.__task_id: TaskID = TaskID(-1)
        self.__progress = Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
            disable=not options.get_show_progress_bar(),
        )

    @property
    def started(self) -> bool:
        return self.__task_id != TaskID(-1)

    def start(self):
        self.__progress.start()
        self.__task_id = self.__progress.add_task(self.name, total=self.epochs)

    def end(self):
        self.__progress.stop()
        self.__task_id = TaskID(-1)

    def update(self, record: MetricsRecord):
        if not self.started:
            return
        self.__progress.update(
            self.__task_id,
            completed=record.epoch,
            description=f"{self.name} - val acc {record.val_acc:.3f}",
        )


class _WarningCollector(logging.Handler):
    @dataclass
    class Record:
        message: str
        repeats: int = 0

        def __str__(self) -> str:
            if self.repeats:
                return f"{self.message} (and {self.repeats} more like it)"
            return self.message

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.warnings: Dict[str, _WarningCollector.Record] = {}

    def emit(self, record: logging.LogRecord) -> None:
        key = str(record.msg)
        if key in self.warnings:
            self.warnings[key].repeats += 1
        else:
            self.warnings[key] = _WarningCollector.Record(key)


@dataclass
class RunResult:
    run_dir: str
    records: List[MetricsRecord]
    model: MlpModel
    manifest: Dict[str, Any] = field(default_factory=dict)

    @property
    def final_val_acc(self) -> float:
        return self.records[-1].val_acc if self.records else float("nan")

    @property
    def best_val_acc(self) -> float:
        return max((r.val_acc for r in self.records), default=float("nan"))


def load_source(exp: ExperimentConfig) -> Dataset:
    """
    Reads or generates the configured dataset before any splitting or noise.

    :raises ExperimentException: If the files cannot be read.
    """
    dataset = exp.dataset
    try:
        if dataset.kind == DatasetKind.BLOBS:
            return gen_blobs(
                dataset.classes,
                dataset.per_class,
                dim=dataset.dim,
                spread=dataset.spread,
                seed=exp.seed,
                radius=dataset.radius,
            )
        elif dataset.kind == DatasetKind.CIFAR10:
            assert dataset.cifar_paths is not None
            return load_cifar10_binary(dataset.cifar_paths)
        assert dataset.container_path is not None
        return load_dataset(dataset.container_path)
    except (InvalidDataset, OSError) as e:
        raise ExperimentException(f"Could not load the {dataset.kind} dataset: {e}") from e


def prepare_dataset(exp: ExperimentConfig) -> Dataset:
    """
    Loads the source, tags the stratified validation and test rows, and
    corrupts the training labels.

    Noise is only injected when ``η > 0``; otherwise the source's labels are
    kept, so a noisy container can be trained on as-is.

    :raises ExperimentException: If the split or noise does not fit the data.
    """
    ds = load_source(exp)
    try:
        ds = split(
            ds,
            exp.dataset.val_fraction,
            seed=exp.seed,
            test_fraction=exp.dataset.test_fraction,
        )
        if exp.noise.eta > 0:
            ds = inject_noise(ds, exp.noise)
    except (InvalidSplit, InvalidNoiseSpec) as e:
        raise ExperimentException(str(e)) from e
    return ds


def package_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version(), "gjsloss": __version__}
    for package in ("numpy", "scipy", "rich", "cloup", "click", "pyyaml", "psutil"):
        try:
            versions[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def _data_summary(ds: Dataset) -> Dict[str, Any]:
    stats = noise_statistics(ds)
    class_counts = [int((ds.clean_labels[ds.rows(Split.TRAIN)] == k).sum()) for k in range(ds.K)]
    return {
        "N": ds.N,
        "K": ds.K,
        "dim": ds.dim,
        "splits": split_sizes(ds),
        "provenance": ds.provenance,
        "noise": None if ds.noise is None else ds.noise.to_dict(),
        "expected_noise_fraction": (
            expected_changed_fraction(ds.noise, ds.K, class_counts)
            if ds.noise is not None
            else 0.0
        ),
        "realized_noise": stats.to_dict(),
    }


def run_experiment(
    exp: ExperimentConfig,
    tag: Optional[str] = None,
    *,
    overwrite: bool = False,
) -> RunResult:
    """
    Trains one model as configured, inside a fresh run directory under
    ``exp.output_dir`` containing:

    * ``resolved.json``: the validated configuration
    * ``metrics.csv`` and ``metrics.jsonl``: one row per epoch
    * ``manifest.json``: seeds, realized noise, versions, resources and
      summary metrics
    * ``experiment.log``, ``warning.log`` and ``error.log``

    :param tag: The run directory's name. Defaults to a timestamp.
    :param overwrite: Replace an existing run directory with the same tag.
    :raises ExperimentException: If the run directory exists or the data
        cannot be prepared.
    :raises ExperimentError: If training fails.
    """
    tag = tag or datetime.datetime.now().astimezone().strftime("RUN_%Y-%m-%d_%H-%M-%S")
    run_dir = os.path.abspath(os.path.join(exp.output_dir, tag))
    if os.path.exists(run_dir):
        if not os.path.isdir(run_dir):
            raise ExperimentException(f"Run directory '{run_dir}' exists as a file.")
        if not overwrite and len(os.listdir(run_dir)) != 0:
            raise ExperimentException(
                f"Run directory '{run_dir}' already exists; pass a new tag or overwrite it."
            )
        verbose(f"Removing '{run_dir}'…")
        shutil.rmtree(run_dir)
    mkdirp(run_dir)
    info(f"Starting run '{tag}' with the {exp.loss.kind} loss.")

    handlers: List[logging.Handler] = []
    warning_collector = _WarningCollector()
    warning_collector.addFilter(LevelFilter(["WARNING"]))
    handlers.append(warning_collector)
    for level in ["WARNING", "ERROR"]:
        handler = logging.FileHandler(os.path.join(run_dir, f"{level.lower()}.log"), mode="a+")
        handler.setLevel(level)
        handler.setFormatter(PlainFormatter("%(message)s"))
        handler.addFilter(LevelFilter([level]))
        handlers.append(handler)
    handler = logging.FileHandler(os.path.join(run_dir, "experiment.log"), mode="a+")
    handler.setLevel("VERBOSE")
    handler.setFormatter(PlainFormatter("%(asctime)s %(levelname)s %(message)s"))
    handlers.append(handler)
    for handler in handlers:
        register_additional_handler(handler)

    progress_bar = TrainingProgressBar(tag, exp.train.epochs)
    try:
        with open(os.path.join(run_dir, RESOLVED), "w", encoding="utf8") as f:
            f.write(exp.config.dumps())

        ds = prepare_dataset(exp)
        data_summary = _data_summary(ds)
        verbose(
            f"{ds.N} rows, {ds.K} classes; realized noise fraction {data_summary['realized_noise']['changed_fraction']:.4f}."
        )

        with ResourceTracker() as tracker, MetricsWriter(
            os.path.join(run_dir, METRICS_CSV), os.path.join(run_dir, METRICS_JSONL)
        ) as writer:

            def on_epoch(record: MetricsRecord):
                writer.write(record)
                progress_bar.update(record)

            progress_bar.start()
            try:
                result = train_loop(ds, exp.train, on_epoch=on_epoch)
            except TrainingError as e:
                raise ExperimentError(f"Training failed: {e}") from e
            finally:
                progress_bar.end()

        records = result.records
        summary: Dict[str, Any] = {"epochs": len(records)}
        if len(records):
            peak = peak_epoch(records)
            summary.update(
                {
                    "final": records[-1].to_dict(),
                    "peak_epoch": records[peak].epoch,
                    "peak_val_acc": records[peak].val_acc,
                    "final_val_acc": records[-1].val_acc,
                    "final_test_acc": records[-1].test_acc,
                    "post_peak_consistency_correlation": post_peak_correlation(records),
                }
            )

        manifest = {
            "tag": tag,
            "created": datetime.datetime.now().astimezone().isoformat(),
            "command": sys.argv,
            "config": exp.config.to_raw_dict(include_meta=False),
            "loss": exp.loss,
            "seeds": {
                "master": exp.seed,
                "derived": exp.derived_seeds(),
                "per_epoch": list(PER_EPOCH_STREAMS),
            },
            "data": data_summary,
            "versions": package_versions(),
            "resources": tracker.stats_as_dict(),
            "metrics": summary,
        }
        with open(os.path.join(run_dir, MANIFEST), "w", encoding="utf8") as f:
            f.write(dumps_json(manifest))

        if len(records):
            success(
                f"Run '{tag}' finished: final val acc {records[-1].val_acc:.4f}, peak {summary['peak_val_acc']:.4f} at epoch {summary['peak_epoch']}."
            )
        return RunResult(run_dir=run_dir, records=records, model=result.model, manifest=manifest)
    finally:
        for handler in handlers:
            deregister_additional_handler(handler)
            handler.close()
        if len(warning_collector.warnings):
            warn("The following warnings were generated during the run:")
            for record in warning_collector.warnings.values():
                warn(f"{record}")

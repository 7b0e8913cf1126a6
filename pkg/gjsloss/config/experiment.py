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
The variables an experiment configuration file may set, and their
translation into the library's parameter objects.
"""
import os
from enum import Enum
from decimal import Decimal
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from .config import Config, InvalidConfig
from .variable import Variable
from ..common import AnyPath, Path, derive_seed
from ..data import InvalidNoiseSpec, InvalidViewSpec, NoiseKind, NoiseSpec, ViewSpec
from ..losses import InvalidLossSpec, LossKind, LossSpec, ZMode
from ..training import TrainConfig, TrainingError, step_schedule


class DatasetKind(str, Enum):
    BLOBS = "blobs"
    CIFAR10 = "cifar10"
    CONTAINER = "container"

    def __str__(self) -> str:
        return self.value


loss_variables = [
    Variable(
        "LOSS_KIND",
        LossKind,
        "The training loss.",
    ),
    Variable(
        "PI1",
        Decimal,
        "The weight of the label distribution in JS, GJS and JS-on-mean.",
        default=Decimal("0.5"),
    ),
    Variable(
        "M",
        int,
        "The number of distributions compared by GJS and JS-on-mean; the model sees M-1 augmented views per row. Ignored by single-view losses.",
        default=3,
    ),
    Variable(
        "Z_MODE",
        ZMode,
        "Whether divergence losses are divided by -(1-π₁)ln(1-π₁) or by one.",
        default=ZMode.NORMALIZED,
    ),
    Variable(
        "GCE_Q",
        Decimal,
        "The exponent of the GCE loss.",
        default=Decimal("0.7"),
    ),
    Variable(
        "LS_EPSILON",
        Decimal,
        "The mass label smoothing moves to the uniform distribution.",
        default=Decimal("0.1"),
    ),
    Variable(
        "BS_BETA",
        Decimal,
        "The weight of the given label in the bootstrapping target.",
        default=Decimal("0.8"),
    ),
]

dataset_variables = [
    Variable(
        "DATASET",
        DatasetKind,
        "The data source.",
        default=DatasetKind.BLOBS,
    ),
    Variable(
        "BLOBS_CLASSES",
        int,
        "The number of Gaussian clusters.",
        default=4,
    ),
    Variable(
        "BLOBS_PER_CLASS",
        int,
        "Points generated per cluster.",
        default=500,
    ),
    Variable(
        "BLOBS_DIM",
        int,
        "The feature dimension; cluster centers lie on a circle in the first two.",
        default=2,
    ),
    Variable(
        "BLOBS_SPREAD",
        Decimal,
        "The standard deviation of each cluster.",
        default=Decimal("1.0"),
    ),
    Variable(
        "BLOBS_RADIUS",
        Decimal,
        "The radius of the circle the cluster centers lie on.",
        default=Decimal("4.0"),
    ),
    Variable(
        "CIFAR_PATHS",
        Optional[List[Path]],
        "CIFAR-10 binary batch files, read in order. Required when DATASET is cifar10.",
    ),
    Variable(
        "DATASET_PATH",
        Optional[Path],
        "A dataset container written by gjsloss. Required when DATASET is container.",
    ),
    Variable(
        "VAL_FRACTION",
        Decimal,
        "The stratified share of rows held out, with clean labels, for validation.",
        default=Decimal("0.2"),
    ),
    Variable(
        "TEST_FRACTION",
        Decimal,
        "The stratified share of rows held out, with clean labels, for the final test accuracy.",
        default=Decimal("0"),
    ),
]

noise_variables = [
    Variable(
        "NOISE_KIND",
        NoiseKind,
        "The label-noise model applied to training rows.",
        default=NoiseKind.SYMMETRIC_RESAMPLE,
    ),
    Variable(
        "NOISE_ETA",
        Decimal,
        "The probability that a training label is corrupted.",
        default=Decimal("0"),
    ),
    Variable(
        "NOISE_PAIR_MAP",
        Optional[Dict[int, int]],
        "Source to destination classes for asymmetric-pairmap noise.",
    ),
    Variable(
        "NOISE_GROUPS",
        Optional[List[List[int]]],
        "Disjoint class groups cycled within by asymmetric-cycle noise.",
    ),
]

view_variables = [
    Variable(
        "JITTER_SIGMA",
        Decimal,
        "The standard deviation of the Gaussian jitter added to every view.",
        default=Decimal("0"),
    ),
    Variable(
        "MASK_PROB",
        Decimal,
        "The probability of zeroing each feature of a view.",
        default=Decimal("0"),
    ),
]

train_variables = [
    Variable(
        "EPOCHS",
        int,
        "Passes over the training rows.",
        default=100,
        units="epochs",
    ),
    Variable(
        "BATCH_SIZE",
        int,
        "Rows per SGD step.",
        default=64,
        units="rows",
    ),
    Variable(
        "LR",
        Decimal,
        "The initial learning rate.",
        default=Decimal("0.05"),
    ),
    Variable(
        "MOMENTUM",
        Decimal,
        "The Nesterov momentum coefficient.",
        default=Decimal("0.9"),
    ),
    Variable(
        "WEIGHT_DECAY",
        Decimal,
        "The L2 coefficient added to every parameter's gradient.",
        default=Decimal("5e-4"),
    ),
    Variable(
        "LR_DROPS",
        Optional[List[Tuple[int, Decimal]]],
        "(epoch, factor) learning-rate drops. Unset drops by 0.1 at 50% and 75% of EPOCHS; an empty list keeps the rate constant.",
    ),
    Variable(
        "HIDDEN_WIDTHS",
        List[int],
        "The widths of the hidden rectifier layers.",
        default=[64, 64],
    ),
    Variable(
        "SHARDS",
        int,
        "Batch shards whose gradients are computed in parallel and summed in order.",
        default=1,
    ),
]

run_variables = [
    Variable(
        "SEED",
        int,
        "The master seed every stochastic component derives its stream from.",
        default=0,
    ),
    Variable(
        "OUTPUT_DIR",
        str,
        "The directory run directories are created in.",
        default="runs",
    ),
]

experiment_variables = (
    loss_variables
    + dataset_variables
    + noise_variables
    + view_variables
    + train_variables
    + run_variables
)

ONE_SHOT_STREAMS = ("blobs", "split", "noise", "init")
PER_EPOCH_STREAMS = ("shuffle", "views", "consistency")


@dataclass(frozen=True)
class DatasetConfig:
    kind: DatasetKind
    classes: int
    per_class: int
    dim: int
    spread: float
    radius: float
    cifar_paths: Optional[Tuple[str, ...]]
    container_path: Optional[str]
    val_fraction: float
    test_fraction: float


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment: everything :func:`gjsloss.experiments.run_experiment`
    needs to build the data, corrupt it and train.

    :param config: The resolved configuration the object was built from.
    """

    config: Config
    dataset: DatasetConfig
    noise: NoiseSpec
    loss: LossSpec
    train: TrainConfig
    output_dir: str
    seed: int

    @classmethod
    def load(
        Self,
        config_in: Union[AnyPath, Mapping[str, Any]],
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "ExperimentConfig":
        """
        Loads a configuration file or mapping.

        :param overrides: Raw values replacing those of the configuration
            before validation, e.g. a sweep point.
        :raises InvalidConfig: On any parse, validation or consistency error.
        """
        config = Config.load(config_in, experiment_variables)
        if overrides:
            raw = config.to_raw_dict(include_meta=False)
            raw.update(overrides)
            config = Config(Config.load(raw, experiment_variables), meta=config.meta.copy())
        return Self.from_config(config)

    @classmethod
    def from_config(Self, config: Config) -> "ExperimentConfig":
        identifier = (
            os.path.relpath(config.meta.source) if config.meta.source else "configuration dict"
        )
        errors: List[str] = []

        def attempt(fields: str, build):
            try:
                return build()
            except (InvalidLossSpec, InvalidNoiseSpec, InvalidViewSpec, TrainingError) as e:
                errors.append(f"{fields}: {e}")
                return None

        kind: LossKind = config["LOSS_KIND"]
        loss = attempt(
            "LOSS_KIND/PI1/M/Z_MODE/GCE_Q/LS_EPSILON/BS_BETA",
            lambda: LossSpec(
                kind,
                pi1=float(config["PI1"]),
                M=config["M"] if kind.multi_view else 2,
                z_mode=config["Z_MODE"],
                q=float(config["GCE_Q"]),
                epsilon_ls=float(config["LS_EPSILON"]),
                beta_bs=float(config["BS_BETA"]),
            ),
        )

        seed: int = config["SEED"]
        noise = attempt(
            "NOISE_KIND/NOISE_ETA/NOISE_PAIR_MAP/NOISE_GROUPS",
            lambda: NoiseSpec(
                config["NOISE_KIND"],
                eta=float(config["NOISE_ETA"]),
                pair_map=config["NOISE_PAIR_MAP"],
                groups=(
                    None
                    if config["NOISE_GROUPS"] is None
                    else tuple(tuple(group) for group in config["NOISE_GROUPS"])
                ),
                seed=seed,
            ),
        )
        views = attempt(
            "JITTER_SIGMA/MASK_PROB",
            lambda: ViewSpec(
                jitter_sigma=float(config["JITTER_SIGMA"]),
                mask_prob=float(config["MASK_PROB"]),
            ),
        )

        dataset = DatasetConfig(
            kind=config["DATASET"],
            classes=config["BLOBS_CLASSES"],
            per_class=config["BLOBS_PER_CLASS"],
            dim=config["BLOBS_DIM"],
            spread=float(config["BLOBS_SPREAD"]),
            radius=float(config["BLOBS_RADIUS"]),
            cifar_paths=(
                None
                if config["CIFAR_PATHS"] is None
                else tuple(str(path) for path in config["CIFAR_PATHS"])
            ),
            container_path=(
                None if config["DATASET_PATH"] is None else str(config["DATASET_PATH"])
            ),
            val_fraction=float(config["VAL_FRACTION"]),
            test_fraction=float(config["TEST_FRACTION"]),
        )
        if dataset.kind == DatasetKind.CIFAR10 and not dataset.cifar_paths:
            errors.append("CIFAR_PATHS: required when DATASET is cifar10.")
        if dataset.kind == DatasetKind.CONTAINER and dataset.container_path is None:
            errors.append("DATASET_PATH: required when DATASET is container.")
        if not (0 < dataset.val_fraction < 1):
            errors.append(f"VAL_FRACTION: must lie in (0, 1), got {dataset.val_fraction}.")
        if not (0 <= dataset.test_fraction < 1 - dataset.val_fraction):
            errors.append(
                f"TEST_FRACTION: must lie in [0, 1 - VAL_FRACTION), got {dataset.test_fraction}."
            )
        if noise is not None and dataset.kind == DatasetKind.BLOBS:
            try:
                noise.validate(dataset.classes)
            except InvalidNoiseSpec as e:
                errors.append(f"NOISE_PAIR_MAP/NOISE_GROUPS: {e}")

        train = None
        if loss is not None and views is not None:
            epochs: int = config["EPOCHS"]
            lr_drops = config["LR_DROPS"]
            train = attempt(
                "EPOCHS/BATCH_SIZE/LR/MOMENTUM/WEIGHT_DECAY/LR_DROPS/HIDDEN_WIDTHS/SHARDS",
                lambda: TrainConfig(
                    loss=loss,
                    epochs=epochs,
                    batch_size=config["BATCH_SIZE"],
                    lr=float(config["LR"]),
                    momentum=float(config["MOMENTUM"]),
                    lr_drops=(
                        step_schedule(epochs)
                        if lr_drops is None
                        else tuple((e, float(f)) for e, f in lr_drops)
                    ),
                    weight_decay=float(config["WEIGHT_DECAY"]),
                    views=views,
                    hidden_widths=tuple(config["HIDDEN_WIDTHS"]),
                    seed=seed,
                    shards=config["SHARDS"],
                ),
            )

        if len(errors) != 0:
            raise InvalidConfig(identifier, [], errors)
        assert loss is not None and noise is not None and train is not None
        return Self(
            config=config,
            dataset=dataset,
            noise=noise,
            loss=loss,
            train=train,
            output_dir=config["OUTPUT_DIR"],
            seed=seed,
        )

    def derived_seeds(self) -> Dict[str, int]:
        """
        The seeds of the components that draw once per run. The per-epoch
        streams (:data:`PER_EPOCH_STREAMS`) use ``derive_seed(seed, label,
        epoch)``.
        """
        return {label: derive_seed(self.seed, label) for label in ONE_SHOT_STREAMS}

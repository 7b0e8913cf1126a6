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
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .model import MlpModel, init_model
from .metrics import MetricsRecord, consistency_rate, evaluate
from ..common import derive_seed, get_tpe
from ..data import Dataset, Split, ViewSpec, make_views_batch
from ..losses import LossSpec, loss_and_grad
from ..logging import debug


class TrainingError(RuntimeError):
    pass


class NonFiniteLoss(TrainingError):
    def __init__(self, batch_index: int, value: float, epoch: Optional[int] = None) -> None:
        self.batch_index = batch_index
        self.value = value
        self.epoch = epoch
        where = f"batch {batch_index}" if epoch is None else f"epoch {epoch}, batch {batch_index}"
        super().__init__(f"Non-finite loss {value} at {where}.")


@dataclass(frozen=True)
class TrainConfig:
    """
    :param loss: The training loss.
    :param epochs: Passes over the training rows.
    :param batch_size: Rows per SGD step; the last batch of an epoch may be
        smaller.
    :param lr: The initial learning rate.
    :param momentum: The Nesterov momentum coefficient.
    :param lr_drops: ``(epoch, factor)`` pairs: from ``epoch`` (zero-based)
        onwards the learning rate is multiplied by ``factor``.
    :param weight_decay: L2 coefficient added to every parameter's gradient.
    :param views: The augmentation. Every loss sees ``loss.num_preds`` views
        of each row.
    :param hidden_widths: Widths of the rectifier layers.
    :param seed: The master seed of the run.
    :param shards: Splits each batch into this many shards whose gradients
        are computed on the worker pool and summed in shard order.
    """

    loss: LossSpec
    epochs: int = 100
    batch_size: int = 64
    lr: float = 0.05
    momentum: float = 0.9
    lr_drops: Tuple[Tuple[int, float], ...] = ()
    weight_decay: float = 5e-4
    views: ViewSpec = field(default_factory=ViewSpec)
    hidden_widths: Tuple[int, ...] = (64, 64)
    seed: int = 0
    shards: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.lr) and self.lr > 0):
            raise TrainingError(f"lr must be a positive real, got {self.lr}")
        if not (0 <= self.momentum < 1):
            raise TrainingError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.batch_size < 1:
            raise TrainingError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.epochs < 0:
            raise TrainingError(f"epochs must be non-negative, got {self.epochs}")
        if not (self.weight_decay >= 0):
            raise TrainingError(f"weight_decay must be non-negative, got {self.weight_decay}")
        if self.shards < 1:
            raise TrainingError(f"shards must be at least 1, got {self.shards}")
        drops = tuple(sorted((int(e), float(f)) for e, f in self.lr_drops))
        if any(e < 0 or not (f > 0) for e, f in drops):
            raise TrainingError(f"lr_drops need non-negative epochs and positive factors, got {drops}")
        object.__setattr__(self, "lr_drops", drops)
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))

    def learning_rate(self, epoch: int) -> float:
        lr = self.lr
        for drop_epoch, factor in self.lr_drops:
            if epoch >= drop_epoch:
                lr *= factor
        return lr

    @property
    def view_spec(self) -> ViewSpec:
        return self.views.with_views(self.loss.num_preds)


def step_schedule(epochs: int, factor: float = 0.1) -> Tuple[Tuple[int, float], ...]:
    """
    Drops the learning rate by ``factor`` at 50% and 75% of training.
    """
    return ((epochs // 2, factor), ((3 * epochs) // 4, factor))


@dataclass
class OptimizerState:
    velocity: List[np.ndarray]

    @classmethod
    def zeros(Self, model: MlpModel) -> "OptimizerState":
        return Self([np.zeros_like(p) for p in model.parameters])


@dataclass
class StepResult:
    model: MlpModel
    state: OptimizerState
    loss: float


def model_loss_and_grad(
    model: MlpModel,
    spec: LossSpec,
    features: np.ndarray,
    labels: np.ndarray,
    targets: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    :param features: Shape ``(B, spec.num_preds, D)``: the views of each row.
    :returns: The per-row losses and ``∂(Σ_b L_b)/∂θ``.
    """
    logits, cache = model.forward(features)
    values, grad_logits = loss_and_grad(spec, labels, logits, targets)
    return values, model.backward(cache, grad_logits)


def _nesterov(
    parameters: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    velocity: Sequence[np.ndarray],
    lr: float,
    momentum: float,
    weight_decay: float,
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    new_parameters = []
    new_velocity = []
    for p, g, v in zip(parameters, grads, velocity):
        g = g + weight_decay * p
        v = momentum * v + g
        new_parameters.append(p - lr * (g + momentum * v))
        new_velocity.append(v)
    return new_parameters, new_velocity


def train_step(
    model: MlpModel,
    features: np.ndarray,
    labels: np.ndarray,
    cfg: TrainConfig,
    rng: np.random.Generator,
    state: Optional[OptimizerState] = None,
    lr: Optional[float] = None,
    batch_index: int = 0,
    epoch: Optional[int] = None,
) -> StepResult:
    """
    One SGD step with Nesterov momentum on the batch mean of the loss.

    Each row is expanded into ``cfg.loss.num_preds`` views drawn from ``rng``.
    With ``cfg.shards > 1`` the batch is split into contiguous shards whose
    gradient sums are computed on the worker pool and added in shard order.

    :param lr: Overrides ``cfg.lr``, e.g. with the scheduled rate. May be
        zero.
    :raises NonFiniteLoss: If any row's loss is not finite; the parameters
        are not updated.
    """
    labels = np.asarray(labels, dtype=np.int64)
    B = labels.shape[0]
    if B == 0:
        raise TrainingError(f"batch {batch_index} is empty")
    state = state or OptimizerState.zeros(model)
    lr = cfg.lr if lr is None else lr

    views = make_views_batch(features, cfg.view_spec, rng)
    shards = np.array_split(np.arange(B), min(cfg.shards, B))
    if len(shards) == 1:
        results = [model_loss_and_grad(model, cfg.loss, views, labels)]
    else:
        futures = [
            get_tpe().submit(model_loss_and_grad, model, cfg.loss, views[s], labels[s])
            for s in shards
        ]
        results = [future.result() for future in futures]

    values = np.concatenate([r[0] for r in results])
    bad = np.flatnonzero(~np.isfinite(values))
    if len(bad):
        raise NonFiniteLoss(batch_index, float(values[bad[0]]), epoch)
    grads = [sum(parts) / B for parts in zip(*(r[1] for r in results))]

    parameters, velocity = _nesterov(
        model.parameters, grads, state.velocity, lr, cfg.momentum, cfg.weight_decay
    )
    return StepResult(
        model=model.with_parameters(parameters),
        state=OptimizerState(velocity),
        loss=float(values.mean()),
    )


@dataclass
class TrainResult:
    records: List[MetricsRecord]
    model: MlpModel


def train_loop(
    ds: Dataset,
    cfg: TrainConfig,
    on_epoch: Optional[Callable[[MetricsRecord], None]] = None,
) -> TrainResult:
    """
    Trains a fresh :func:`init_model` on the training rows of ``ds``.

    Batch order, views and the consistency probe of every epoch draw from
    streams derived from ``cfg.seed``, so identical inputs yield identical
    metrics apart from wall time.

    :param on_epoch: Called with each epoch's record as soon as it exists.
    :raises TrainingError: If ``ds`` has no training or validation rows, or
        the parameters stop being finite.
    """
    train_idx = ds.rows(Split.TRAIN)
    val_idx = ds.rows(Split.VAL)
    test_idx = ds.rows(Split.TEST)
    if len(train_idx) == 0:
        raise TrainingError("the dataset has no training rows")
    if len(val_idx) == 0:
        raise TrainingError("the dataset has no validation rows; split it first")

    model = init_model((ds.dim,) + cfg.hidden_widths + (ds.K,), cfg.seed)
    records: List[MetricsRecord] = []
    if cfg.epochs == 0:
        return TrainResult(records, model)

    X, y, clean = ds.features, ds.labels, ds.clean_labels
    state = OptimizerState.zeros(model)
    for epoch in range(cfg.epochs):
        started = time.perf_counter()
        lr = cfg.learning_rate(epoch)
        order = np.random.default_rng(derive_seed(cfg.seed, "shuffle", epoch)).permutation(
            train_idx
        )
        view_rng = np.random.default_rng(derive_seed(cfg.seed, "views", epoch))
        loss_total = 0.0
        for batch_index, start in enumerate(range(0, len(order), cfg.batch_size)):
            rows = order[start : start + cfg.batch_size]
            result = train_step(
                model,
                X[rows],
                y[rows],
                cfg,
                view_rng,
                state,
                lr=lr,
                batch_index=batch_index,
                epoch=epoch + 1,
            )
            model, state = result.model, result.state
            loss_total += result.loss * len(rows)
        if not model.is_finite():
            raise TrainingError(f"parameters became non-finite during epoch {epoch + 1}")

        record = MetricsRecord(
            epoch=epoch + 1,
            train_loss=loss_total / len(order),
            train_acc_noisy=evaluate(model, X[train_idx], y[train_idx]),
            train_acc_clean=evaluate(model, X[train_idx], clean[train_idx]),
            val_acc=evaluate(model, X[val_idx], clean[val_idx]),
            consistency=consistency_rate(
                model, X[train_idx], cfg.views, derive_seed(cfg.seed, "consistency", epoch)
            ),
            seconds=time.perf_counter() - started,
            lr=lr,
            test_acc=evaluate(model, X[test_idx], clean[test_idx]) if len(test_idx) else None,
        )
        debug(
            f"Epoch {record.epoch}: loss {record.train_loss:.4f}, val acc {record.val_acc:.4f}."
        )
        records.append(record)
        if on_epoch is not None:
            on_epoch(record)
    return TrainResult(records, model)

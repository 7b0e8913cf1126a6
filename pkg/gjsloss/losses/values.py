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
Loss values. The batched :func:`loss_values` is the single evaluation path;
the per-sample functions validate their inputs and delegate to it.
"""
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import rel_entr

from .spec import InvalidLossSpec, LossKind, LossSpec
from ..core import (
    DimensionMismatch,
    clamp_project,
    prob_vec,
    stack_distributions,
)
from ..core.divergences import _gjs
from ..core.simplex import ArrayLike, check_class_index

Predictions = Union[ArrayLike, Sequence[ArrayLike]]


def one_hot_batch(labels: np.ndarray, K: int) -> np.ndarray:
    result = np.zeros((labels.shape[0], K))
    result[np.arange(labels.shape[0]), labels] = 1.0
    return result


def smoothed_target(spec: LossSpec, labels: np.ndarray, K: int) -> np.ndarray:
    """
    ``(1-ε) e_y + ε u`` for label smoothing.
    """
    return (1.0 - spec.epsilon_ls) * one_hot_batch(labels, K) + spec.epsilon_ls / K


def bootstrap_target(spec: LossSpec, labels: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """
    ``β e_y + (1-β) p`` for bootstrapping. The caller treats the result as a
    constant.
    """
    return spec.beta_bs * one_hot_batch(labels, probs.shape[-1]) + (1.0 - spec.beta_bs) * probs


def soft_cross_entropy(target: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """
    ``-Σ t_k ln p_k`` with ``p`` projected through :func:`clamp_project`.
    """
    return -np.sum(target * np.log(clamp_project(probs)), axis=-1)


def _check_batch(spec: LossSpec, labels: np.ndarray, probs: np.ndarray):
    if probs.ndim != 3:
        raise DimensionMismatch(
            f"expected predictions of shape (batch, views, classes), got {probs.shape}"
        )
    if probs.shape[1] != spec.num_preds:
        raise DimensionMismatch(
            f"{spec.kind} with M={spec.M} takes {spec.num_preds} prediction(s), got {probs.shape[1]}"
        )
    if labels.shape != (probs.shape[0],):
        raise DimensionMismatch(
            f"{labels.shape[0] if labels.ndim else 1} labels given for {probs.shape[0]} predictions"
        )
    K = probs.shape[-1]
    if np.any(labels < 0) or np.any(labels >= K):
        bad = labels[(labels < 0) | (labels >= K)][0]
        check_class_index(int(bad), K)


def loss_values(
    spec: LossSpec,
    labels: np.ndarray,
    probs: np.ndarray,
    targets: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Evaluates the loss for a batch.

    :param labels: Integer class indices, shape ``(B,)``.
    :param probs: Predictions, shape ``(B, spec.num_preds, K)``.
    :param targets: Overrides the soft target of ``LS``/``BS``, shape
        ``(B, K)``. Used to hold the bootstrap target fixed.
    :returns: Loss values, shape ``(B,)``.
    """
    labels = np.asarray(labels, dtype=np.int64)
    _check_batch(spec, labels, probs)
    B, _, K = probs.shape
    kind = spec.kind
    rows = np.arange(B)
    e = one_hot_batch(labels, K)

    if kind.divergence_based:
        pi1 = spec.pi1
        if kind == LossKind.JS_ON_MEAN:
            stacked = np.stack([e, probs.mean(axis=1)], axis=1)
            w = np.array([pi1, 1.0 - pi1])
        else:
            stacked = np.concatenate([e[:, None, :], probs], axis=1)
            w = spec.weights
        return _gjs(w, stacked) / spec.Z

    p = probs[:, 0, :]
    p_y = p[rows, labels]
    if kind in (LossKind.CE, LossKind.KL):
        return -np.log(clamp_project(p)[rows, labels])
    elif kind == LossKind.MAE:
        return 1.0 - p_y
    elif kind == LossKind.GCE:
        return (1.0 - np.power(p_y, spec.q)) / spec.q
    elif kind == LossKind.LS:
        target = targets if targets is not None else smoothed_target(spec, labels, K)
        return soft_cross_entropy(target, p)
    elif kind == LossKind.BS:
        target = targets if targets is not None else bootstrap_target(spec, labels, p)
        return soft_cross_entropy(target, p)
    elif kind == LossKind.KL_REVERSE:
        return rel_entr(p, clamp_project(e)).sum(axis=-1)
    elif kind == LossKind.JEFFREYS:
        forward = -np.log(clamp_project(p)[rows, labels])
        reverse = rel_entr(p, clamp_project(e)).sum(axis=-1)
        return (forward + reverse) / 2.0
    elif kind == LossKind.K:
        return -np.log((1.0 + p_y) / 2.0)
    elif kind == LossKind.K_PRIME:
        return rel_entr(p, (e + p) / 2.0).sum(axis=-1)
    raise InvalidLossSpec(f"unsupported loss kind {kind}")


def _single(spec: LossSpec, label: int, preds: Predictions) -> float:
    stacked = stack_distributions(preds) if _is_list(preds) else prob_vec(preds)[None, :]
    if stacked.ndim != 2:
        raise DimensionMismatch(f"expected one sample's predictions, got shape {stacked.shape}")
    K = stacked.shape[-1]
    check_class_index(label, K)
    return float(loss_values(spec, np.array([int(label)]), stacked[None, :, :])[0])


def _is_list(preds: Predictions) -> bool:
    if isinstance(preds, np.ndarray):
        return preds.ndim == 2
    return len(preds) > 0 and np.ndim(preds[0]) == 1  # type: ignore


def _require(spec: LossSpec, *kinds: LossKind):
    if spec.kind not in kinds:
        raise InvalidLossSpec(
            f"expected a {'/'.join(str(k) for k in kinds)} loss, got {spec.kind}"
        )


def loss_js(spec: LossSpec, label: int, p: ArrayLike) -> float:
    """
    ``JS_{[π₁, 1-π₁]}(e_y, p) / Z``.
    """
    _require(spec, LossKind.JS)
    return _single(spec, label, p)


def loss_gjs(spec: LossSpec, label: int, preds: Predictions) -> float:
    """
    ``GJS_π(e_y, p_2, …, p_M) / Z`` with ``π₂ = … = π_M = (1-π₁)/(M-1)``.
    """
    _require(spec, LossKind.GJS)
    return _single(spec, label, preds)


def loss_js_on_mean(spec: LossSpec, label: int, preds: Predictions) -> float:
    """
    The JS term of the decomposition alone: ``JS_{[π₁, 1-π₁]}(e_y, m_{>1}) / Z``.
    """
    _require(spec, LossKind.JS_ON_MEAN)
    return _single(spec, label, preds)


def loss_baseline(spec: LossSpec, label: int, p: ArrayLike) -> float:
    _require(spec, LossKind.CE, LossKind.MAE, LossKind.GCE, LossKind.LS, LossKind.BS)
    return _single(spec, label, p)


def loss_dissection(spec: LossSpec, label: int, p: ArrayLike) -> float:
    """
    A single divergence between the label distribution and ``p``, unscaled.
    """
    _require(
        spec,
        LossKind.KL,
        LossKind.KL_REVERSE,
        LossKind.JEFFREYS,
        LossKind.K,
        LossKind.K_PRIME,
    )
    return _single(spec, label, p)


def loss_value(spec: LossSpec, label: int, preds: Predictions) -> float:
    """
    Evaluates any loss kind for one sample.
    """
    return _single(spec, label, preds)


def sum_over_classes(spec: LossSpec, preds: Predictions) -> float:
    """
    ``Σ_k L(e_k, preds)``: the loss summed over every possible label with the
    predictions held fixed.
    """
    stacked = stack_distributions(preds) if _is_list(preds) else prob_vec(preds)[None, :]
    return float(sum_over_classes_batch(spec, stacked[None, :, :])[0])


def sum_over_classes_batch(spec: LossSpec, probs: np.ndarray) -> np.ndarray:
    """
    :param probs: Shape ``(B, spec.num_preds, K)``.
    :returns: Shape ``(B,)``.
    """
    B, _, K = probs.shape
    total = np.zeros(B)
    for k in range(K):
        total += loss_values(spec, np.full(B, k), probs)
    return total

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
Analytic loss gradients with respect to logits.

Every kind first produces ``∂L/∂p`` for each prediction and pulls it back
through the softmax with :func:`gjsloss.core.softmax_vjp`, so each logit
gradient sums to zero. The label distribution is constant.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import softmax

from .spec import InvalidLossSpec, LossKind, LossSpec
from .values import (
    bootstrap_target,
    loss_values,
    one_hot_batch,
    smoothed_target,
)
from ..core import DimensionMismatch, clamp_project, logit_vec, softmax_vjp
from ..core.simplex import ArrayLike, check_class_index

_TINY = np.finfo(np.float64).tiny


def _safe_log(x: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(x, _TINY))


def _grad_probs(
    spec: LossSpec,
    labels: np.ndarray,
    probs: np.ndarray,
    targets: Optional[np.ndarray],
) -> np.ndarray:
    B, n, K = probs.shape
    kind = spec.kind
    rows = np.arange(B)
    e = one_hot_batch(labels, K)
    grad = np.zeros_like(probs)

    if kind == LossKind.JS or kind == LossKind.GJS:
        w = spec.weights
        m = w[0] * e + np.einsum("m,bmk->bk", w[1:], probs)
        grad = w[1:, None] * (_safe_log(probs) - _safe_log(m)[:, None, :])
        return grad / spec.Z
    elif kind == LossKind.JS_ON_MEAN:
        pi1 = spec.pi1
        mean_pred = probs.mean(axis=1)
        m = pi1 * e + (1.0 - pi1) * mean_pred
        grad_mean = (1.0 - pi1) * (_safe_log(mean_pred) - _safe_log(m))
        grad[:] = grad_mean[:, None, :] / n
        return grad / spec.Z

    p = probs[:, 0, :]
    p_y = p[rows, labels]
    g = np.zeros_like(p)
    if kind in (LossKind.CE, LossKind.KL):
        g[rows, labels] = -1.0 / np.maximum(p_y, _TINY)
    elif kind == LossKind.MAE:
        g[rows, labels] = -1.0
    elif kind == LossKind.GCE:
        g[rows, labels] = -np.power(np.maximum(p_y, _TINY), spec.q - 1.0)
    elif kind in (LossKind.LS, LossKind.BS):
        if targets is None:
            if kind == LossKind.LS:
                targets = smoothed_target(spec, labels, K)
            else:
                targets = bootstrap_target(spec, labels, p)
        g = -targets / np.maximum(p, _TINY)
    elif kind == LossKind.KL_REVERSE:
        g = _safe_log(p) + 1.0 - np.log(clamp_project(e))
    elif kind == LossKind.JEFFREYS:
        g = (_safe_log(p) + 1.0 - np.log(clamp_project(e))) / 2.0
        g[rows, labels] -= 0.5 / np.maximum(p_y, _TINY)
    elif kind == LossKind.K:
        g[rows, labels] = -1.0 / (1.0 + p_y)
    elif kind == LossKind.K_PRIME:
        m = (e + p) / 2.0
        g = _safe_log(p) + 1.0 - _safe_log(m) - p / (2.0 * np.maximum(m, _TINY))
    else:
        raise InvalidLossSpec(f"unsupported loss kind {kind}")
    grad[:, 0, :] = g
    return grad


def loss_and_grad(
    spec: LossSpec,
    labels: np.ndarray,
    logits: np.ndarray,
    targets: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluates a batch of losses and their gradients with respect to logits.

    :param labels: Shape ``(B,)``.
    :param logits: Shape ``(B, spec.num_preds, K)``.
    :param targets: See :func:`gjsloss.losses.loss_values`.
    :returns: Values of shape ``(B,)`` and gradients shaped like ``logits``.
    """
    labels = np.asarray(labels, dtype=np.int64)
    probs = softmax(logits, axis=-1)
    values = loss_values(spec, labels, probs, targets)
    grad = softmax_vjp(probs, _grad_probs(spec, labels, probs, targets))
    return values, grad


def grad_loss_logits(
    spec: LossSpec,
    label: int,
    zs: Sequence[ArrayLike],
) -> List[np.ndarray]:
    """
    The exact gradient of any loss kind with respect to each prediction's
    logits.

    :param zs: One logit vector per prediction (``M-1`` for ``GJS`` and
        ``JS-on-mean``, one otherwise).
    :returns: One gradient vector per prediction.
    """
    stacked = np.stack([logit_vec(z) for z in zs])
    if stacked.ndim != 2:
        raise DimensionMismatch(f"expected a list of logit vectors, got shape {stacked.shape}")
    check_class_index(label, stacked.shape[-1])
    _, grad = loss_and_grad(spec, np.array([int(label)]), stacked[None, :, :])
    return list(grad[0])


def grad_js_logits(spec: LossSpec, label: int, z: ArrayLike) -> np.ndarray:
    """
    Closed-form JS gradient with respect to the logits:

    ``∂L/∂z_i = -(1-π₁) (∂p_y/∂z_i) ln(π₁ / ((1-π₁) p_y) + 1) / Z``

    where ``∂p_y/∂z_i = p_y (1[i = y] - p_i)``.
    """
    if spec.kind != LossKind.JS:
        raise InvalidLossSpec(f"expected a JS loss, got {spec.kind}")
    z = logit_vec(z)
    if z.ndim != 1:
        raise DimensionMismatch(f"expected a single logit vector, got shape {z.shape}")
    check_class_index(label, z.shape[0])
    p = softmax(z)
    p_y = p[label]
    dp_y = -p_y * p
    dp_y[label] += p_y
    pi1 = spec.pi1
    scale = math.log(pi1 / ((1.0 - pi1) * max(p_y, _TINY)) + 1.0)
    return -(1.0 - pi1) * dp_y * scale / spec.Z

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
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import softmax

from ..common import derive_seed
from ..core.grid import random_logits
from ..losses import LossKind, LossSpec, loss_and_grad, loss_values
from ..losses.values import bootstrap_target
from ..training import MlpModel, model_loss_and_grad

MIN_STEP = 1e-8
MAX_STEP = 1e-3
# Relative errors are taken against max(|analytic|, |numeric|, GRADIENT_FLOOR)
# so near-stationary points are compared absolutely.
GRADIENT_FLOOR = 1e-2


class NonFiniteEvaluation(ValueError):
    pass


def finite_diff_grad(
    evaluator: Callable[[np.ndarray], float],
    zs: np.ndarray,
    h: float = 1e-6,
) -> np.ndarray:
    """
    Central differences ``(f(z + h e_i) - f(z - h e_i)) / 2h`` for every
    coordinate of ``zs``, which may have any shape.

    :raises ValueError: If ``h`` lies outside ``[1e-8, 1e-3]``.
    :raises NonFiniteEvaluation: If the evaluator returns a non-finite value.
    """
    if not (MIN_STEP <= h <= MAX_STEP):
        raise ValueError(f"step {h} outside [{MIN_STEP}, {MAX_STEP}]")
    base = np.array(zs, dtype=np.float64)
    grad = np.zeros_like(base)
    flat = base.reshape(-1)
    flat_grad = grad.reshape(-1)
    for i in range(flat.shape[0]):
        original = flat[i]
        flat[i] = original + h
        upper = float(evaluator(base))
        flat[i] = original - h
        lower = float(evaluator(base))
        flat[i] = original
        if not (math.isfinite(upper) and math.isfinite(lower)):
            raise NonFiniteEvaluation(
                f"evaluator returned a non-finite value around coordinate {i}"
            )
        flat_grad[i] = (upper - lower) / (2.0 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(
        float(np.max(np.abs(analytic))), float(np.max(np.abs(numeric))), GRADIENT_FLOOR
    )
    return float(np.max(np.abs(analytic - numeric))) / scale


@dataclass
class GradientCheckReport:
    spec: LossSpec
    cases: int
    worst_relative_error: float
    worst_case: Optional[dict] = None


def loss_evaluator(
    spec: LossSpec,
    label: int,
    frozen_target: Optional[np.ndarray] = None,
) -> Callable[[np.ndarray], float]:
    """
    :returns: ``z ↦ L(y, softmax(z))`` for logits of shape
        ``(spec.num_preds, K)``. The bootstrap target, when given, is held
        constant, matching the analytic gradient.
    """
    labels = np.array([label])
    targets = None if frozen_target is None else frozen_target[None, :]

    def evaluate(z: np.ndarray) -> float:
        probs = softmax(z, axis=-1)[None, :, :]
        return float(loss_values(spec, labels, probs, targets)[0])

    return evaluate


def check_loss_gradients(
    spec: LossSpec,
    cases: int = 200,
    max_K: int = 10,
    h: float = 1e-5,
    seed: int = 0,
    random_pi1: bool = False,
) -> GradientCheckReport:
    """
    Compares :func:`gjsloss.losses.loss_and_grad` against central differences
    on ``cases`` random labels and logits with ``2 ≤ K ≤ max_K``.

    :param random_pi1: Draw ``π₁`` uniformly from ``(0.05, 0.95)`` per case
        instead of using ``spec.pi1``.
    """
    rng = np.random.default_rng(derive_seed(seed, f"gradient-check-{spec.kind}"))
    worst = 0.0
    worst_case = None
    for case in range(cases):
        case_spec = spec
        if random_pi1:
            case_spec = spec.with_kind(spec.kind, pi1=float(rng.uniform(0.05, 0.95)))
        K = int(rng.integers(2, max_K + 1))
        label = int(rng.integers(0, K))
        z = random_logits(rng, case_spec.num_preds, K)
        frozen = None
        if case_spec.kind == LossKind.BS:
            frozen = bootstrap_target(case_spec, np.array([label]), softmax(z[0]))[0]
        targets = None if frozen is None else frozen[None, :]
        _, analytic = loss_and_grad(case_spec, np.array([label]), z[None, :, :], targets)
        numeric = finite_diff_grad(loss_evaluator(case_spec, label, frozen), z, h)
        error = relative_error(analytic[0], numeric)
        if error > worst:
            worst = error
            worst_case = {"case": case, "K": K, "label": label, "pi1": case_spec.pi1}
    return GradientCheckReport(
        spec=spec, cases=cases, worst_relative_error=worst, worst_case=worst_case
    )


def check_model_gradients(
    model: MlpModel,
    features: np.ndarray,
    labels: np.ndarray,
    spec: LossSpec,
    h: float = 1e-6,
) -> float:
    """
    Compares backpropagation through ``model`` against central differences
    over its flattened parameters, for the batch mean of the loss.

    :param features: Shape ``(B, D)``, repeated for every prediction slot, or
        ``(B, spec.num_preds, D)`` holding fixed views.
    :returns: The relative error of the full parameter gradient.
    """
    labels = np.asarray(labels, dtype=np.int64)
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 2:
        features = np.repeat(features[:, None, :], spec.num_preds, axis=1)
    B = labels.shape[0]

    targets = None
    if spec.kind == LossKind.BS:
        probs = model.predict_proba(features)[:, 0, :]
        targets = bootstrap_target(spec, labels, probs)

    _, grads = model_loss_and_grad(model, spec, features, labels, targets)
    analytic = np.concatenate([g.reshape(-1) for g in grads]) / B

    def objective(vector: np.ndarray) -> float:
        logits = model.unflatten(vector).logits(features)
        return float(np.mean(loss_values(spec, labels, softmax(logits, axis=-1), targets)))

    numeric = finite_diff_grad(objective, model.flatten(), h)
    return relative_error(analytic, numeric)

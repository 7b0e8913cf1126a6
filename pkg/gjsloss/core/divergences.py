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
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .simplex import (
    ArrayLike,
    AbsoluteContinuityViolation,
    DimensionMismatch,
    InvalidDistribution,
    _check_same_classes,
    _entropy,
    _kl,
    _mixture,
    prob_vec,
    stack_distributions,
    weight_vec,
)

ONE_HOT_TOLERANCE = 1e-12


class DivergenceKind(str, Enum):
    KL = "KL"
    KL_REVERSE = "KL-reverse"
    JEFFREYS = "Jeffreys"
    K = "K"
    K_PRIME = "K-prime"
    JS = "JS"
    GJS = "GJS"

    def __str__(self) -> str:
        return self.value


_BOUNDED = {
    DivergenceKind.K,
    DivergenceKind.K_PRIME,
    DivergenceKind.JS,
    DivergenceKind.GJS,
}


def is_bounded(kind: DivergenceKind) -> bool:
    """
    :returns: Whether the divergence stays below a finite constant over the
        whole simplex. KL, its reverse and Jeffreys grow without bound as the
        supports separate.
    """
    return DivergenceKind(kind) in _BOUNDED


def is_symmetric(kind: DivergenceKind, w: Optional[ArrayLike] = None) -> bool:
    """
    :param w: The weights of a JS or GJS divergence. Ignored for the other
        kinds. Without weights, JS and GJS are not symmetric in general.
    :returns: Whether permuting the distributions leaves the value unchanged.
        JS and GJS are symmetric only when every weight is equal.
    """
    kind = DivergenceKind(kind)
    if kind in (DivergenceKind.JS, DivergenceKind.GJS):
        if w is None:
            return False
        w = weight_vec(w)
        if kind == DivergenceKind.JS and w.shape[0] != 2:
            raise DimensionMismatch(f"JS takes 2 weights, got {w.shape[0]}")
        return bool(np.allclose(w, w[0], rtol=0.0, atol=1e-12))
    return kind == DivergenceKind.JEFFREYS


def _pair(p: ArrayLike, q: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    p = prob_vec(p)
    q = prob_vec(q)
    _check_same_classes(p, q)
    return p, q


def js_div(w: ArrayLike, p1: ArrayLike, p2: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``H(m) - π₁H(p1) - π₂H(p2)`` with ``m = π₁p1 + π₂p2``.
    """
    w = weight_vec(w)
    if w.shape[0] != 2:
        raise DimensionMismatch(f"JS takes 2 weights, got {w.shape[0]}")
    p1, p2 = _pair(p1, p2)
    return _gjs(w, np.stack(np.broadcast_arrays(p1, p2), axis=-2))


def js_div_kl_form(w: ArrayLike, p1: ArrayLike, p2: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``π₁KL(p1‖m) + π₂KL(p2‖m)``. Agrees with :func:`js_div`.
    """
    w = weight_vec(w)
    if w.shape[0] != 2:
        raise DimensionMismatch(f"JS takes 2 weights, got {w.shape[0]}")
    p1, p2 = _pair(p1, p2)
    return _gjs_kl_form(w, np.stack(np.broadcast_arrays(p1, p2), axis=-2))


def gjs_div(w: ArrayLike, ps: Union[ArrayLike, Sequence[ArrayLike]]) -> Union[float, np.ndarray]:
    """
    ``H(Σ π_i p_i) - Σ π_i H(p_i)`` over ``M`` distributions.

    :param w: ``M`` strictly positive weights.
    :param ps: A list of ``M`` distributions, or an array of shape
        ``(..., M, K)``.
    """
    w = weight_vec(w)
    return _gjs(w, stack_distributions(ps))


def gjs_div_kl_form(w: ArrayLike, ps: Union[ArrayLike, Sequence[ArrayLike]]) -> Union[float, np.ndarray]:
    w = weight_vec(w)
    return _gjs_kl_form(w, stack_distributions(ps))


def _gjs(w: np.ndarray, stacked: np.ndarray):
    m = _mixture(w, stacked)
    result = _entropy(m) - np.einsum("m,...m->...", w, np.atleast_1d(_entropy(stacked)))
    result = np.maximum(result, 0.0)
    return float(result) if np.ndim(result) == 0 else result


def _gjs_kl_form(w: np.ndarray, stacked: np.ndarray):
    m = _mixture(w, stacked)
    kls = _kl(stacked, m[..., None, :])
    result = np.einsum("m,...m->...", w, np.atleast_1d(kls))
    return float(result) if np.ndim(result) == 0 else result


def k_div(p: ArrayLike, q: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``K(p, q) = KL(p‖(p + q)/2)``, bounded by ``ln 2``.
    """
    p, q = _pair(p, q)
    return _kl(p, (p + q) / 2.0)


def k_prime_div(p: ArrayLike, q: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``K'(p, q) = KL(q‖(p + q)/2)``, i.e. :func:`k_div` with the roles swapped.
    """
    p, q = _pair(p, q)
    return _kl(q, (p + q) / 2.0)


def jeffreys_div(p: ArrayLike, q: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``(KL(p‖q) + KL(q‖p))/2``.

    :raises AbsoluteContinuityViolation: Unless ``p`` and ``q`` share their
        support.
    """
    p, q = _pair(p, q)
    if np.any((p > 0) != (q > 0)):
        raise AbsoluteContinuityViolation(
            "Jeffreys divergence is undefined for distributions with different supports"
        )
    return (_kl(p, q) + _kl(q, p)) / 2.0


def _kl_checked(p: np.ndarray, q: np.ndarray):
    if np.any((q == 0) & (p > 0)):
        raise AbsoluteContinuityViolation(
            "KL(p‖q) is undefined: q assigns zero mass where p does not"
        )
    return _kl(p, q)


def divergence(
    kind: DivergenceKind,
    p: ArrayLike,
    q: ArrayLike,
    w: Optional[ArrayLike] = None,
) -> Union[float, np.ndarray]:
    """
    Evaluates a member of the divergence family between two distributions.

    :param kind: The divergence.
    :param w: Weights for ``JS``/``GJS``. Defaults to ``[1/2, 1/2]``.
    """
    kind = DivergenceKind(kind)
    if kind in (DivergenceKind.JS, DivergenceKind.GJS):
        return js_div(w if w is not None else [0.5, 0.5], p, q)
    if w is not None:
        raise ValueError(f"{kind} takes no weights")
    if kind == DivergenceKind.K:
        return k_div(p, q)
    elif kind == DivergenceKind.K_PRIME:
        return k_prime_div(p, q)
    elif kind == DivergenceKind.JEFFREYS:
        return jeffreys_div(p, q)
    p, q = _pair(p, q)
    if kind == DivergenceKind.KL:
        return _kl_checked(p, q)
    return _kl_checked(q, p)


def check_one_hot(label: ArrayLike) -> int:
    """
    :returns: The class a one-hot distribution points at.
    :raises InvalidDistribution: If ``label`` is not one-hot.
    """
    label = prob_vec(label, "label distribution")
    if label.ndim != 1:
        raise InvalidDistribution(f"expected a single label distribution, got shape {label.shape}")
    index = int(np.argmax(label))
    if abs(label[index] - 1.0) > ONE_HOT_TOLERANCE:
        raise InvalidDistribution(f"label distribution is not one-hot: {label}")
    return index


def decompose_gjs(
    w: ArrayLike,
    label: ArrayLike,
    preds: Union[ArrayLike, Sequence[ArrayLike]],
) -> Tuple[float, float]:
    """
    Splits ``GJS_π(e_y, p_2, …, p_M)`` into a JS term between the label and the
    mean prediction and a label-free consistency term among the predictions.

    With ``m_{>1} = Σ_{j≥2} π_j p_j / (1-π₁)`` and ``π'' = π_{j≥2}/(1-π₁)``:

    - ``js_term = JS_{[π₁, 1-π₁]}(e_y, m_{>1})``
    - ``consistency_term = (1-π₁) GJS_{π''}(p_2, …, p_M)``

    :raises InvalidDistribution: If ``label`` is not one-hot or ``M < 3``.
    """
    w = weight_vec(w)
    M = w.shape[0]
    if M < 3:
        raise InvalidDistribution(f"the decomposition needs M ≥ 3 distributions, got M={M}")
    check_one_hot(label)
    label = prob_vec(label)
    stacked = stack_distributions(preds)
    if stacked.ndim != 2:
        raise DimensionMismatch(f"expected a list of predictions, got shape {stacked.shape}")
    _check_same_classes(label, stacked)
    if stacked.shape[0] != M - 1:
        raise DimensionMismatch(f"{M - 1} predictions expected for {M} weights, got {stacked.shape[0]}")

    pi1 = w[0]
    pred_weights = w[1:] / (1.0 - pi1)
    mean_pred = _mixture(pred_weights, stacked)
    js_term = _gjs(np.array([pi1, 1.0 - pi1]), np.stack([label, mean_pred]))
    consistency_term = (1.0 - pi1) * _gjs(pred_weights, stacked)
    return float(js_term), float(consistency_term)

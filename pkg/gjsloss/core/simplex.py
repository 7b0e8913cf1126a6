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
Numerically safe primitives on categorical distributions.

Every function accepts a single vector of shape ``(K,)`` or a batch of shape
``(..., K)``; the class axis is always the last one. Logarithms are natural.
"""
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt
from scipy.special import entr, rel_entr, softmax as _softmax

EPS_PROB = 1e-12
SUM_TOLERANCE = 1e-9
RENORMALIZE_TOLERANCE = 1e-6
WEIGHT_TOLERANCE = 1e-12

ArrayLike = Union[npt.ArrayLike, Sequence[float]]


class InvalidDistribution(ValueError):
    """
    Raised when a vector fails the invariants of a probability or weight
    vector.
    """


class DimensionMismatch(ValueError):
    """
    Raised when distributions that must share a class count do not, or when the
    number of distributions disagrees with the number of weights.
    """


class AbsoluteContinuityViolation(ValueError):
    """
    Raised when ``KL(p‖q)`` is requested with ``q_k = 0`` and ``p_k > 0``.
    """


class InvalidClassIndex(IndexError):
    pass


def _as_float_array(values: ArrayLike, what: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 0:
        raise InvalidDistribution(f"{what} must be a vector, got a scalar")
    if not np.all(np.isfinite(array)):
        raise InvalidDistribution(f"{what} has non-finite entries: {array}")
    return array


def prob_vec(values: ArrayLike, what: str = "probability vector") -> np.ndarray:
    """
    Validates (a batch of) points on the probability simplex.

    Entries must be non-negative and there must be at least two classes. Sums
    within :data:`SUM_TOLERANCE` of one are accepted as-is, sums within
    :data:`RENORMALIZE_TOLERANCE` are renormalized and anything further off is
    rejected.

    :returns: A float64 copy of the input.
    """
    array = _as_float_array(values, what)
    if array.shape[-1] < 2:
        raise InvalidDistribution(f"{what} needs at least 2 classes, got {array.shape[-1]}")
    if np.any(array < 0):
        raise InvalidDistribution(f"{what} has negative entries: {array}")
    sums = array.sum(axis=-1, keepdims=True)
    deviation = np.abs(sums - 1.0)
    if np.any(deviation > RENORMALIZE_TOLERANCE):
        raise InvalidDistribution(
            f"{what} does not sum to 1 (worst sum {sums.flat[np.argmax(deviation)]})"
        )
    if np.any(deviation > SUM_TOLERANCE):
        return array / sums
    return array.copy()


def weight_vec(values: ArrayLike) -> np.ndarray:
    """
    Validates divergence weights: at least two strictly positive entries summing
    to one.
    """
    array = _as_float_array(values, "weight vector")
    if array.ndim != 1:
        raise InvalidDistribution(f"weight vector must be 1-dimensional, got shape {array.shape}")
    if array.shape[0] < 2:
        raise InvalidDistribution(f"weight vector needs at least 2 entries, got {array.shape[0]}")
    if np.any(array <= 0):
        raise InvalidDistribution(f"weight vector entries must be strictly positive: {array}")
    total = array.sum()
    if abs(total - 1.0) > RENORMALIZE_TOLERANCE:
        raise InvalidDistribution(f"weight vector does not sum to 1 (sum {total})")
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        return array / total
    return array.copy()


def logit_vec(values: ArrayLike) -> np.ndarray:
    array = _as_float_array(values, "logit vector")
    if array.shape[-1] < 2:
        raise InvalidDistribution(f"logit vector needs at least 2 classes, got {array.shape[-1]}")
    return array


def one_hot(label: int, K: int) -> np.ndarray:
    check_class_index(label, K)
    result = np.zeros(K)
    result[label] = 1.0
    return result


def check_class_index(index: int, K: int):
    if not (0 <= int(index) < K) or int(index) != index:
        raise InvalidClassIndex(f"class index {index} is out of range for K={K}")


def uniform(K: int) -> np.ndarray:
    return np.full(K, 1.0 / K)


def entropy(p: ArrayLike) -> Union[float, np.ndarray]:
    """
    Shannon entropy ``-Σ p_k ln p_k``, with ``0 ln 0 = 0``.
    """
    p = prob_vec(p)
    return _entropy(p)


def _entropy(p: np.ndarray):
    result = entr(p).sum(axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def kl_div(p: ArrayLike, q: ArrayLike) -> Union[float, np.ndarray]:
    """
    ``KL(p‖q) = Σ p_k ln(p_k / q_k)`` with ``0 ln(0/q) = 0``.

    :raises AbsoluteContinuityViolation: If ``q_k = 0`` while ``p_k > 0``.
    """
    p = prob_vec(p)
    q = prob_vec(q)
    _check_same_classes(p, q)
    if np.any((q == 0) & (p > 0)):
        raise AbsoluteContinuityViolation(
            "KL(p‖q) is undefined: q assigns zero mass where p does not"
        )
    return _kl(p, q)


def _kl(p: np.ndarray, q: np.ndarray):
    result = rel_entr(p, q).sum(axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def _check_same_classes(*arrays: np.ndarray):
    class_counts = {array.shape[-1] for array in arrays}
    if len(class_counts) != 1:
        raise DimensionMismatch(
            f"distributions disagree on the number of classes: {sorted(class_counts)}"
        )


def stack_distributions(ps: Union[ArrayLike, Sequence[ArrayLike]]) -> np.ndarray:
    """
    Validates a list of distributions sharing a class count and stacks them
    along a new second-to-last axis.
    """
    if isinstance(ps, np.ndarray):
        if ps.ndim < 2:
            raise DimensionMismatch(f"expected a list of distributions, got shape {ps.shape}")
        return prob_vec(ps)
    arrays = [_as_float_array(p, "probability vector") for p in ps]
    if len(arrays) == 0:
        raise DimensionMismatch("expected at least one distribution")
    _check_same_classes(*arrays)
    return prob_vec(np.stack(arrays, axis=-2))


def mixture(w: ArrayLike, ps: Union[ArrayLike, Sequence[ArrayLike]]) -> np.ndarray:
    """
    The convex combination ``Σ_i w_i p_i``.

    :param w: The weights, length ``M``.
    :param ps: ``M`` distributions, either a list or an array of shape
        ``(..., M, K)``.
    """
    w = weight_vec(w)
    stacked = stack_distributions(ps)
    return _mixture(w, stacked)


def _mixture(w: np.ndarray, stacked: np.ndarray) -> np.ndarray:
    if stacked.shape[-2] != w.shape[0]:
        raise DimensionMismatch(
            f"{w.shape[0]} weights given for {stacked.shape[-2]} distributions"
        )
    result = np.einsum("m,...mk->...k", w, stacked)
    return result / result.sum(axis=-1, keepdims=True)


def softmax(z: ArrayLike) -> np.ndarray:
    """
    Shift-invariant softmax over the last axis.
    """
    z = logit_vec(z)
    return _softmax(z, axis=-1)


def softmax_jacobian_entry(p: ArrayLike, j: int, i: int) -> float:
    """
    ``∂p_j/∂z_i = p_j (1[i = j] - p_i)`` for a single softmax output ``p``.
    """
    p = prob_vec(p)
    if p.ndim != 1:
        raise DimensionMismatch(f"expected a single distribution, got shape {p.shape}")
    K = p.shape[0]
    check_class_index(j, K)
    check_class_index(i, K)
    return float(p[j] * ((1.0 if i == j else 0.0) - p[i]))


def softmax_jacobian(p: ArrayLike) -> np.ndarray:
    """
    The full Jacobian ``diag(p) - p pᵀ``, whose entry ``[j, i]`` is
    ``∂p_j/∂z_i``.
    """
    p = prob_vec(p)
    return np.diag(p) - np.outer(p, p)


def softmax_vjp(p: np.ndarray, grad_p: np.ndarray) -> np.ndarray:
    """
    Pulls a gradient with respect to softmax outputs back to the logits:
    ``g_z,i = p_i (g_i - Σ_k p_k g_k)``. Works on batches.
    """
    return p * (grad_p - np.sum(p * grad_p, axis=-1, keepdims=True))


def clamp_project(raw: ArrayLike, eps: float = EPS_PROB) -> np.ndarray:
    """
    Projects raw non-negative scores onto the interior of the simplex.

    Negative entries are zeroed, the vector is normalized, every entry is
    clamped to ``[eps, 1]`` and the result is renormalized. Valid
    distributions move by at most ``K * eps``.

    :raises InvalidDistribution: If the input has no positive mass.
    """
    array = _as_float_array(raw, "raw scores")
    array = np.maximum(array, 0.0)
    sums = array.sum(axis=-1, keepdims=True)
    if np.any(sums <= 0):
        raise InvalidDistribution("cannot project a vector with no positive mass")
    array = np.clip(array / sums, eps, 1.0)
    return array / array.sum(axis=-1, keepdims=True)


def gjs_weights(pi1: float, M: int) -> np.ndarray:
    """
    ``[π₁, (1-π₁)/(M-1), …]``: the label weight followed by ``M-1`` equal
    prediction weights.
    """
    if not (0.0 < pi1 < 1.0):
        raise InvalidDistribution(f"π₁ must lie in (0, 1), got {pi1}")
    if M < 2:
        raise InvalidDistribution(f"M must be at least 2, got {M}")
    return np.concatenate([[pi1], np.full(M - 1, (1.0 - pi1) / (M - 1))])

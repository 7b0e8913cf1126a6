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
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidBoundRequest, ResourceCapExceeded, UnboundedLossError
from .oracles import h, oracle_kl
from ..core import decompose_gjs, random_simplex, simplex_lattice, uniform, one_hot
from ..core.grid import lattice_size
from ..common import derive_seed, get_tpe
from ..losses import LossKind, LossSpec, ZMode, normalizer, sum_over_classes, sum_over_classes_batch
from ..logging import debug, warn

EVALUATION_CAP = 10**7
CHUNK_SIZE = 20_000
_CLOSED_FORM_KINDS = (LossKind.JS, LossKind.GJS, LossKind.MAE)


@dataclass
class BoundReport:
    """
    The outcome of a bound search.

    :param b_lower: The closed-form lower bound ``B_L``.
    :param b_upper: The closed-form upper bound ``B_U``.
    :param observed_min: The smallest class sum found.
    :param observed_max: The largest class sum found.
    :param worst_violation: ``max(0, B_L - observed_min, observed_max - B_U)``.
    :param argmin_point: The predictions attaining ``observed_min``.
    :param argmax_point: The predictions attaining ``observed_max``.
    :param evaluations: The number of prediction tuples evaluated.
    :param grid_resolution: The lattice denominator used, ``0`` if none.
    """

    spec: LossSpec
    K: int
    b_lower: float
    b_upper: float
    observed_min: float
    observed_max: float
    worst_violation: float
    argmin_point: List[List[float]]
    argmax_point: List[List[float]]
    evaluations: int
    grid_resolution: int = 0
    seed: int = 0

    def passes(self, tolerance: float = 1e-9) -> bool:
        return self.worst_violation <= tolerance

    @property
    def argmin_distance_to_uniform(self) -> float:
        """
        The largest coordinate distance from the argmin predictions to the
        uniform distribution.
        """
        return float(np.max(np.abs(np.array(self.argmin_point) - 1.0 / self.K)))

    @property
    def argmax_at_vertices(self) -> bool:
        """
        Whether the argmax predictions are one-hot, and pairwise distinct.
        """
        points = np.array(self.argmax_point)
        if not np.all(np.isclose(points.max(axis=1), 1.0, rtol=0, atol=1e-12)):
            return False
        classes = points.argmax(axis=1)
        return len(set(classes.tolist())) == len(classes)

    def to_dict(self) -> dict:
        return {
            "loss": self.spec,
            "K": self.K,
            "b_lower": self.b_lower,
            "b_upper": self.b_upper,
            "observed_min": self.observed_min,
            "observed_max": self.observed_max,
            "worst_violation": self.worst_violation,
            "argmin_point": self.argmin_point,
            "argmax_point": self.argmax_point,
            "evaluations": self.evaluations,
            "grid_resolution": self.grid_resolution,
            "seed": self.seed,
        }


def _extremal_predictions(spec: LossSpec, K: int) -> Tuple[np.ndarray, np.ndarray]:
    n = spec.num_preds
    if n > K:
        raise InvalidBoundRequest(
            f"{spec.kind} with M={spec.M} needs {n} distinct one-hot predictions, but K={K} (M must be at most K+1)"
        )
    lower = np.tile(uniform(K), (n, 1))
    upper = np.stack([one_hot(j, K) for j in range(n)])
    return lower, upper


def bound_constants(
    spec: LossSpec,
    K: int,
    allow_clamped: bool = False,
) -> Tuple[float, float]:
    """
    ``B_L = Σ_k L(e_k, u, …, u)`` and ``B_U = Σ_k L(e_k, e_1, …, e_{M-1})``.

    :param allow_clamped: Evaluate the same sums for an unbounded loss, where
        ``B_U`` is an artifact of the probability floor. A warning is emitted.
    :raises InvalidBoundRequest: For ``M > K+1`` or for bounded losses whose
        class sums are not extremized at these points.
    :raises UnboundedLossError: For unbounded losses unless ``allow_clamped``.
    """
    if K < 2:
        raise InvalidBoundRequest(f"K must be at least 2, got {K}")
    if not spec.kind.bounded:
        if not allow_clamped:
            raise UnboundedLossError(
                f"{spec.kind} is unbounded: Σ_k L(e_k, f(x)) has no finite upper bound"
            )
        warn(
            f"{spec.kind} is unbounded; the reported B_U only reflects the probability floor."
        )
    elif spec.kind not in _CLOSED_FORM_KINDS:
        raise InvalidBoundRequest(
            f"closed-form bounds are stated for {', '.join(str(k) for k in _CLOSED_FORM_KINDS)}, not {spec.kind}"
        )
    lower, upper = _extremal_predictions(spec, K)
    return sum_over_classes(spec, lower), sum_over_classes(spec, upper)


def js_bound_closed_form(
    pi1: float,
    K: int,
    z_mode: ZMode = ZMode.NORMALIZED,
) -> Tuple[float, float]:
    """
    The JS bounds without going through the loss implementation:
    ``B_L = K·JS(e_1, u)/Z`` and ``B_U = (K-1)(h(π₁) + h(1-π₁))/Z`` where
    ``h(x) = -x ln x``; in normalized mode ``B_U = (K-1)(1 + h(π₁)/h(1-π₁))``.
    """
    Z = 1.0 if ZMode(z_mode) == ZMode.UNIT else h(1.0 - pi1)
    e = [1.0] + [0.0] * (K - 1)
    u = [1.0 / K] * K
    m = [pi1 * a + (1.0 - pi1) * b for a, b in zip(e, u)]
    js_at_uniform = pi1 * oracle_kl(e, m) + (1.0 - pi1) * oracle_kl(u, m)
    b_lower = K * js_at_uniform / Z
    if ZMode(z_mode) == ZMode.UNIT:
        b_upper = (K - 1) * (h(pi1) + h(1.0 - pi1))
    else:
        b_upper = (K - 1) * (1.0 + h(pi1) / h(1.0 - pi1))
    return b_lower, b_upper


def upper_bound_consistency_share(
    pi1: float,
    K: int,
    M: int,
    z_mode: ZMode = ZMode.NORMALIZED,
) -> float:
    """
    The part of ``B_U`` contributed by the label-free consistency term:
    ``K (1-π₁) ln(M-1) / Z``.
    """
    return K * (1.0 - pi1) * math.log(M - 1) / normalizer(pi1, z_mode)


def upper_bound_from_decomposition(spec: LossSpec, K: int) -> Tuple[float, float]:
    """
    Recomputes ``B_U`` for a GJS loss as the sum of its decomposed terms.

    :returns: The JS-term total and the consistency-term total, each summed
        over all ``K`` labels and divided by ``Z``.
    """
    if spec.kind != LossKind.GJS or spec.M < 3:
        raise InvalidBoundRequest("the decomposition applies to GJS with M ≥ 3")
    _, upper = _extremal_predictions(spec, K)
    js_total = 0.0
    consistency_total = 0.0
    for k in range(K):
        js_term, consistency_term = decompose_gjs(spec.weights, one_hot(k, K), upper)
        js_total += js_term
        consistency_total += consistency_term
    return js_total / spec.Z, consistency_total / spec.Z


def bound_gap_vs_M(
    pi1: float,
    K: int,
    m_values: List[int],
    z_mode: ZMode = ZMode.NORMALIZED,
) -> List[Tuple[int, float]]:
    """
    :returns: ``(M, B_U - B_L)`` for each ``M`` of a GJS loss.
    """
    result = []
    for M in m_values:
        spec = LossSpec(LossKind.GJS, pi1=pi1, M=M, z_mode=z_mode)
        b_lower, b_upper = bound_constants(spec, K)
        result.append((M, b_upper - b_lower))
    return result


def grid_resolution_for(K: int, n: int, preferred: int = 30, cap: int = 10**6) -> int:
    """
    The finest lattice denominator not above ``preferred`` whose ``n``-fold
    product stays within ``cap`` points.
    """
    for denominator in range(preferred, 0, -1):
        if lattice_size(K, denominator) ** n <= cap:
            return denominator
    return 1


@dataclass
class _ChunkResult:
    minimum: float = math.inf
    argmin: Optional[np.ndarray] = None
    maximum: float = -math.inf
    argmax: Optional[np.ndarray] = None
    evaluations: int = 0

    def merge(self, other: "_ChunkResult"):
        if other.minimum < self.minimum:
            self.minimum, self.argmin = other.minimum, other.argmin
        if other.maximum > self.maximum:
            self.maximum, self.argmax = other.maximum, other.argmax
        self.evaluations += other.evaluations


def _evaluate(spec: LossSpec, probs: np.ndarray) -> _ChunkResult:
    sums = sum_over_classes_batch(spec, probs)
    lo, hi = int(np.argmin(sums)), int(np.argmax(sums))
    return _ChunkResult(
        minimum=float(sums[lo]),
        argmin=probs[lo],
        maximum=float(sums[hi]),
        argmax=probs[hi],
        evaluations=probs.shape[0],
    )


def _grid_chunk(spec: LossSpec, lattice: np.ndarray, start: int, stop: int) -> _ChunkResult:
    n = spec.num_preds
    G = lattice.shape[0]
    flat = np.arange(start, stop)
    indices = np.stack(np.unravel_index(flat, (G,) * n), axis=1)
    return _evaluate(spec, lattice[indices])


def _random_chunk(spec: LossSpec, K: int, count: int, seed: int) -> _ChunkResult:
    rng = np.random.default_rng(seed)
    probs = random_simplex(rng, count * spec.num_preds, K).reshape(count, spec.num_preds, K)
    return _evaluate(spec, probs)


def bound_search(
    spec: LossSpec,
    K: int,
    samples: int,
    grid_resolution: int = 0,
    seed: int = 0,
    allow_clamped: bool = False,
    cap: int = EVALUATION_CAP,
) -> BoundReport:
    """
    Searches for class sums outside ``[B_L, B_U]``.

    The search evaluates ``Σ_k L(e_k, ·)`` over every tuple of lattice points
    (one per prediction slot) and over ``samples`` random tuples of flat
    Dirichlet draws. Work is split into chunks run on the global thread pool;
    chunk ``i`` of the random phase draws from ``derive_seed(seed,
    "bound-search", i)`` so the result does not depend on the worker count.

    :param grid_resolution: The lattice denominator; ``0`` skips the grid.
        Grid mode is limited to ``K ≤ 5``.
    :raises ResourceCapExceeded: When the grid and samples exceed ``cap``
        evaluations.
    """
    b_lower, b_upper = bound_constants(spec, K, allow_clamped=allow_clamped)
    n = spec.num_preds

    lattice: Optional[np.ndarray] = None
    grid_count = 0
    if grid_resolution > 0:
        if K > 5:
            raise InvalidBoundRequest(f"grid searches are limited to K ≤ 5, got K={K}")
        grid_count = lattice_size(K, grid_resolution) ** n
        if grid_count + samples > cap:
            raise ResourceCapExceeded(
                f"A bound search over a {grid_resolution}-lattice with {n} prediction slot(s) and {samples} samples",
                grid_count + samples,
                cap,
            )
        lattice = simplex_lattice(K, grid_resolution)
    elif samples > cap:
        raise ResourceCapExceeded("A random bound search", samples, cap)

    debug(
        f"Searching {spec.kind} bounds (K={K}, M={spec.M}): {grid_count} grid tuples, {samples} random tuples."
    )

    tpe = get_tpe()
    futures = []
    for start in range(0, grid_count, CHUNK_SIZE):
        futures.append(
            tpe.submit(_grid_chunk, spec, lattice, start, min(grid_count, start + CHUNK_SIZE))
        )
    for i, start in enumerate(range(0, samples, CHUNK_SIZE)):
        count = min(samples, start + CHUNK_SIZE) - start
        futures.append(
            tpe.submit(_random_chunk, spec, K, count, derive_seed(seed, "bound-search", i))
        )

    merged = _ChunkResult()
    for future in futures:
        merged.merge(future.result())

    if merged.evaluations == 0:
        raise InvalidBoundRequest("a bound search needs a grid or at least one sample")

    worst = max(0.0, b_lower - merged.minimum, merged.maximum - b_upper)
    assert merged.argmin is not None and merged.argmax is not None
    return BoundReport(
        spec=spec,
        K=K,
        b_lower=b_lower,
        b_upper=b_upper,
        observed_min=merged.minimum,
        observed_max=merged.maximum,
        worst_violation=worst,
        argmin_point=merged.argmin.tolist(),
        argmax_point=merged.argmax.tolist(),
        evaluations=merged.evaluations,
        grid_resolution=grid_resolution,
        seed=seed,
    )

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
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from .bounds import EVALUATION_CAP, bound_constants
from .errors import InvalidRiskInstance, ResourceCapExceeded
from ..common import derive_seed
from ..core import simplex_lattice
from ..core.grid import lattice_size
from ..data.noise import NoiseKind, NoiseSpec, transition_matrix
from ..losses import LossSpec, loss_values


@dataclass(frozen=True)
class RiskInstance:
    """
    A finite learning problem small enough to enumerate every hypothesis.

    The input distribution is uniform over ``num_inputs`` inputs, each with a
    fixed clean label. A hypothesis assigns one point of the
    ``1/grid_resolution`` simplex lattice to every input; multi-view losses
    see that point as each of their predictions.

    :param noise: Must be ``symmetric-exclusive``: the label is kept with
        probability ``1-η`` and moved to each other class with probability
        ``η/(K-1)``.
    """

    num_inputs: int
    K: int
    clean_labels: Tuple[int, ...]
    noise: NoiseSpec
    grid_resolution: int
    cap: int = EVALUATION_CAP

    def __post_init__(self):
        object.__setattr__(self, "clean_labels", tuple(int(y) for y in self.clean_labels))
        if self.num_inputs < 1:
            raise InvalidRiskInstance(f"num_inputs must be positive, got {self.num_inputs}")
        if self.K < 2:
            raise InvalidRiskInstance(f"K must be at least 2, got {self.K}")
        if len(self.clean_labels) != self.num_inputs:
            raise InvalidRiskInstance(
                f"{len(self.clean_labels)} clean labels given for {self.num_inputs} inputs"
            )
        if any(not (0 <= y < self.K) for y in self.clean_labels):
            raise InvalidRiskInstance(f"clean labels {self.clean_labels} out of range for K={self.K}")
        if self.grid_resolution < 2:
            raise InvalidRiskInstance(
                f"grid resolution must be at least 2, got {self.grid_resolution}"
            )
        if self.noise.kind != NoiseKind.SYMMETRIC_EXCLUSIVE:
            raise InvalidRiskInstance(
                f"risk enumeration uses symmetric-exclusive noise, got {self.noise.kind}"
            )
        if not (self.noise.eta < 1.0 - 1.0 / self.K):
            raise InvalidRiskInstance(
                f"η must be below 1 - 1/K = {1.0 - 1.0 / self.K:.6g}, got {self.noise.eta}"
            )

    @property
    def hypothesis_count(self) -> int:
        return lattice_size(self.K, self.grid_resolution) ** self.num_inputs

    @classmethod
    def random(
        Self,
        rng: np.random.Generator,
        K: int,
        eta: float,
        num_inputs: int = 2,
        grid_resolution: int = 10,
    ) -> "RiskInstance":
        labels = tuple(int(y) for y in rng.integers(0, K, size=num_inputs))
        return Self(
            num_inputs=num_inputs,
            K=K,
            clean_labels=labels,
            noise=NoiseSpec(NoiseKind.SYMMETRIC_EXCLUSIVE, eta=eta),
            grid_resolution=grid_resolution,
        )


class RiskGaps(NamedTuple):
    """
    :param noisy_gap: ``R^η(f*) - R^η(f*_η)``, expected in ``[0, noisy_bound]``.
    :param noisy_bound: ``η (B_U - B_L) / (K-1)``.
    :param clean_gap: ``R(f*) - R(f*_η)``, expected in ``[clean_bound, 0]``.
    :param clean_bound: ``-η (B_U - B_L) / (K-1-ηK)``.
    """

    noisy_gap: float
    noisy_bound: float
    clean_gap: float
    clean_bound: float

    def worst_violation(self) -> float:
        return max(
            0.0,
            -self.noisy_gap,
            self.noisy_gap - self.noisy_bound,
            self.clean_gap,
            self.clean_bound - self.clean_gap,
        )


def _risk_tables(inst: RiskInstance, spec: LossSpec) -> Tuple[np.ndarray, np.ndarray]:
    lattice = simplex_lattice(inst.K, inst.grid_resolution)
    G = lattice.shape[0]
    probs = np.repeat(lattice[:, None, :], spec.num_preds, axis=1)
    # losses[k, g]: loss of lattice point g under label k
    losses = np.stack([loss_values(spec, np.full(G, k), probs) for k in range(inst.K)])
    T = transition_matrix(inst.noise, inst.K)
    labels = np.array(inst.clean_labels)
    clean = losses[labels]
    noisy = T[labels] @ losses
    return clean, noisy


def _total_risk(per_input: np.ndarray) -> np.ndarray:
    n, G = per_input.shape
    total = np.zeros((G,) * n)
    for i in range(n):
        shape = [1] * n
        shape[i] = G
        total = total + per_input[i].reshape(shape)
    return total.reshape(-1) / n


def risk_bound_enumeration(
    inst: RiskInstance,
    spec: LossSpec,
    allow_clamped: bool = False,
) -> RiskGaps:
    """
    Finds the clean-risk minimizer ``f*`` and the noisy-risk minimizer
    ``f*_η`` by exhaustive enumeration and reports both risk gaps next to
    their bounds under symmetric-exclusive noise.

    Risks are exact expectations over the noise transition matrix. Ties go to
    the first hypothesis in lattice order.

    :raises ResourceCapExceeded: When ``inst.hypothesis_count`` exceeds
        ``inst.cap``.
    :raises UnboundedLossError: For unbounded losses unless ``allow_clamped``.
    """
    count = inst.hypothesis_count
    if count > inst.cap:
        raise ResourceCapExceeded(
            f"Enumerating {inst.num_inputs} inputs over a {inst.grid_resolution}-lattice",
            count,
            inst.cap,
        )
    b_lower, b_upper = bound_constants(spec, inst.K, allow_clamped=allow_clamped)

    clean_table, noisy_table = _risk_tables(inst, spec)
    clean_risk = _total_risk(clean_table)
    noisy_risk = _total_risk(noisy_table)

    f_star = int(np.argmin(clean_risk))
    f_star_eta = int(np.argmin(noisy_risk))

    K = inst.K
    eta = inst.noise.eta
    spread = b_upper - b_lower
    return RiskGaps(
        noisy_gap=float(noisy_risk[f_star] - noisy_risk[f_star_eta]),
        noisy_bound=eta * spread / (K - 1),
        clean_gap=float(clean_risk[f_star] - clean_risk[f_star_eta]),
        clean_bound=-eta * spread / (K - 1 - eta * K),
    )


def regression_corpus(seed: int, count: int = 20) -> List[RiskInstance]:
    """
    Seeded instances over ``K ∈ {2, 3}`` and ``η ∈ {0.1, 0.3}``, two inputs
    each on a ``1/10`` lattice.
    """
    instances = []
    for i in range(count):
        rng = np.random.default_rng(derive_seed(seed, "risk-instance", i))
        K = (2, 3)[i % 2]
        eta = (0.1, 0.3)[(i // 2) % 2]
        instances.append(RiskInstance.random(rng, K=K, eta=eta))
    return instances

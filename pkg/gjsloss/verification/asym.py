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
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import InvalidBoundRequest
from .oracles import h
from ..common import derive_seed
from ..core import entropy, one_hot, random_simplex
from ..losses import LossKind, LossSpec, loss_values

ZERO_TOLERANCE = 1e-12


@dataclass
class AsymConditionReport:
    """
    :param C1: ``H(π)``, the upper bound on the unnormalized divergence.
    :param C2: ``h(π₁) + h(Σ_{l≥2} π_l)``, its value when every prediction is
        the same wrong one-hot.
    :param max_violation: The largest deviation from any of the three
        conditions.
    :param violations: The largest deviation per condition.
    """

    K: int
    M: int
    pi1: float
    C1: float
    C2: float
    max_violation: float
    violations: Dict[str, float] = field(default_factory=dict)


def asym_condition_check(
    spec: LossSpec,
    K: int,
    M: Optional[int] = None,
    samples: int = 100_000,
    seed: int = 0,
) -> AsymConditionReport:
    """
    Checks the conditions under which a loss keeps its risk bound under
    class-conditional noise, on the unnormalized GJS divergence:

    1. ``L(e_i, p_2, …, p_M) = 0`` iff every ``p_j = e_i``.
    2. ``0 ≤ L ≤ C1`` everywhere.
    3. ``L(e_i, e_j, …, e_j) = C2`` for every ``i ≠ j``, and ``C2 ≤ C1``.

    Condition 2 is probed with ``samples`` random prediction tuples plus every
    tuple of one-hot vertices; condition 1 with the all-correct tuples and the
    random tuples, which must all be strictly positive.

    :param M: Overrides ``spec.M``.
    """
    if spec.kind not in (LossKind.JS, LossKind.GJS):
        raise InvalidBoundRequest(f"the conditions are checked for the GJS family, not {spec.kind}")
    M = M if M is not None else (spec.M if spec.kind == LossKind.GJS else 2)
    gjs = LossSpec(LossKind.GJS, pi1=spec.pi1, M=M)
    n = gjs.num_preds
    Z = gjs.Z
    weights = gjs.weights

    C1 = float(entropy(weights))
    C2 = h(gjs.pi1) + h(1.0 - gjs.pi1)

    def divergence(labels: np.ndarray, probs: np.ndarray) -> np.ndarray:
        return loss_values(gjs, labels, probs) * Z

    labels = np.arange(K)
    correct = np.stack([np.tile(one_hot(i, K), (n, 1)) for i in range(K)])
    zero_violation = float(np.max(np.abs(divergence(labels, correct))))

    rng = np.random.default_rng(derive_seed(seed, "asym-conditions"))
    random_labels = rng.integers(0, K, size=samples)
    random_probs = random_simplex(rng, samples * n, K).reshape(samples, n, K)
    random_values = divergence(random_labels, random_probs)
    if np.any(random_values <= ZERO_TOLERANCE):
        zero_violation = max(zero_violation, float(ZERO_TOLERANCE - random_values.min()))

    vertex_tuples = np.stack(
        np.meshgrid(*([np.arange(K)] * n), indexing="ij"), axis=-1
    ).reshape(-1, n)
    eye = np.eye(K)
    vertex_values = np.concatenate(
        [divergence(np.full(len(vertex_tuples), i), eye[vertex_tuples]) for i in range(K)]
    )
    all_values = np.concatenate([random_values, vertex_values])
    range_violation = max(0.0, float(-all_values.min()), float(all_values.max() - C1))

    wrong = [(i, j) for i in range(K) for j in range(K) if i != j]
    wrong_labels = np.array([i for i, _ in wrong])
    wrong_probs = np.stack([np.tile(one_hot(j, K), (n, 1)) for _, j in wrong])
    wrong_values = divergence(wrong_labels, wrong_probs)
    constant_violation = max(float(np.max(np.abs(wrong_values - C2))), C2 - C1)

    violations = {
        "zero_iff_correct": zero_violation,
        "bounded_by_C1": range_violation,
        "constant_C2": max(0.0, constant_violation),
    }
    return AsymConditionReport(
        K=K,
        M=M,
        pi1=gjs.pi1,
        C1=C1,
        C2=C2,
        max_violation=max(violations.values()),
        violations=violations,
    )

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
Independent reference evaluations.

Nothing here calls into :mod:`gjsloss.core` or :mod:`gjsloss.losses`: the
oracles are written against plain Python floats so a defect in the vectorized
paths cannot hide behind a shared helper.
"""
import math
from typing import Sequence

Vector = Sequence[float]


def oracle_entropy(p: Vector) -> float:
    return -math.fsum(x * math.log(x) for x in p if x > 0)


def oracle_kl(p: Vector, q: Vector) -> float:
    total = []
    for p_k, q_k in zip(p, q):
        if p_k == 0:
            continue
        if q_k == 0:
            return math.inf
        total.append(p_k * math.log(p_k / q_k))
    return math.fsum(total)


def oracle_mixture(w: Vector, ps: Sequence[Vector]) -> list:
    K = len(ps[0])
    return [math.fsum(w_i * p[k] for w_i, p in zip(w, ps)) for k in range(K)]


def oracle_gjs(w: Vector, ps: Sequence[Vector]) -> float:
    """
    ``Σ π_i KL(p_i‖m)``.
    """
    m = oracle_mixture(w, ps)
    return math.fsum(w_i * oracle_kl(p, m) for w_i, p in zip(w, ps))


def h(x: float) -> float:
    """
    ``-x ln x`` with ``h(0) = 0``.
    """
    return 0.0 if x == 0 else -x * math.log(x)


def oracle_z(pi1: float) -> float:
    return h(1.0 - pi1)


def js_f(pi1: float, t: float) -> float:
    """
    The generator of JS as an f-divergence,
    ``f(t) = π₁ t ln t - (π₁ t + π₂) ln(π₁ t + π₂)``, so that
    ``JS = Σ_k q_k f(p_k / q_k)``.
    """
    pi2 = 1.0 - pi1
    s = pi1 * t + pi2
    return -pi1 * h(t) - s * math.log(s)


def js_f_divergence(w: Vector, p1: Vector, p2: Vector) -> float:
    """
    JS through its f-divergence form, applying the limit conventions
    ``0 f(0/0) = 0`` and ``0 f(a/0) = a lim_{t→∞} f(t)/t = -π₁ a ln π₁``.
    """
    pi1 = w[0]
    terms = []
    for a, b in zip(p1, p2):
        if b == 0:
            terms.append(0.0 if a == 0 else -pi1 * a * math.log(pi1))
        else:
            terms.append(b * js_f(pi1, a / b))
    return math.fsum(terms)


def oracle_js_loss(pi1: float, label: int, p: Vector, normalized: bool = True) -> float:
    e = [1.0 if k == label else 0.0 for k in range(len(p))]
    value = oracle_gjs([pi1, 1.0 - pi1], [e, p])
    return value / oracle_z(pi1) if normalized else value

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
The registered claims, grouped by suite. Importing this module registers
them with :class:`gjsloss.verification.claim.Claim.factory`.
"""
import math
from functools import lru_cache
from typing import Any, Dict, List, Tuple

import numpy as np

from .claim import Claim, Suite
from .asym import asym_condition_check
from .bounds import (
    BoundReport,
    bound_constants,
    bound_gap_vs_M,
    bound_search,
    grid_resolution_for,
    js_bound_closed_form,
    upper_bound_consistency_share,
    upper_bound_from_decomposition,
)
from .errors import UnboundedLossError
from .finite_diff import (
    check_loss_gradients,
    check_model_gradients,
    finite_diff_grad,
    loss_evaluator,
    relative_error,
)
from .limits import (
    MAE_LADDER,
    LimitKind,
    LimitProbeReport,
    limit_convergence_probe,
    mae_limit_threshold,
)
from .oracles import h, js_f_divergence, oracle_entropy, oracle_gjs
from .risk import regression_corpus, risk_bound_enumeration
from ..common import derive_seed
from ..core import decompose_gjs, entropy, gjs_div, gjs_div_kl_form, js_div, js_div_kl_form
from ..core import gjs_weights, one_hot, random_simplex
from ..core.grid import random_logits
from ..losses import (
    LossKind,
    LossSpec,
    ZMode,
    grad_js_logits,
    grad_loss_logits,
    loss_values,
)
from ..training import init_model

PI1_VALUES = (0.1, 0.5, 0.9)


def _rng(seed: int, label: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, label, index))


# --- bounds ------------------------------------------------------------------


def _bound_specs(K: int) -> List[LossSpec]:
    specs = [LossSpec(LossKind.MAE)]
    for pi1 in PI1_VALUES:
        specs.append(LossSpec(LossKind.JS, pi1=pi1))
        specs.append(LossSpec(LossKind.GJS, pi1=pi1, M=3))
    return specs


@lru_cache(maxsize=8)
def _grid_reports(seed: int, quick: bool) -> Tuple[BoundReport, ...]:
    reports = []
    for K in (2, 3, 4):
        for spec in _bound_specs(K):
            if spec.kind == LossKind.MAE:
                continue
            resolution = grid_resolution_for(
                K, spec.num_preds, preferred=12 if quick else 30, cap=10**5 if quick else 10**6
            )
            reports.append(bound_search(spec, K, samples=0, grid_resolution=resolution, seed=seed))
    return tuple(reports)


def _config(report: BoundReport) -> str:
    return f"{report.spec.kind} K={report.K} M={report.spec.M} π₁={report.spec.pi1}"


@Claim.factory.register()
class BoundSearch(Claim):
    id = "bounds.search"
    suite = Suite.BOUNDS
    description = "Σ_k L(e_k, f(x)) stays within [B_L, B_U] on simplex grids and random draws (JS, GJS, MAE)"
    tolerance = 1e-9

    def measure(self):
        samples = self.budget(100_000, 5_000)
        worst = 0.0
        per_config = {}
        for K in (2, 3, 4, 5):
            for spec in _bound_specs(K):
                resolution = 0
                if K <= 4:
                    resolution = grid_resolution_for(
                        K,
                        spec.num_preds,
                        preferred=self.budget(30, 10),
                        cap=self.budget(10**6, 10**4),
                    )
                report = bound_search(
                    spec, K, samples=samples, grid_resolution=resolution, seed=self.seed
                )
                per_config[_config(report)] = report.worst_violation
                worst = max(worst, report.worst_violation)
        return worst, {"samples": samples, "worst_violation_per_config": per_config}


@Claim.factory.register()
class BoundArgminUniform(Claim):
    id = "bounds.argmin-uniform"
    suite = Suite.BOUNDS
    description = "the grid minimizer of Σ_k L(e_k, ·) lies within one lattice step of the uniform distribution (JS, GJS)"
    tolerance = 0.0

    def measure(self):
        worst = 0.0
        details = {}
        for report in _grid_reports(self.seed, self.quick):
            distance = report.argmin_distance_to_uniform
            excess = max(0.0, distance - 1.0 / report.grid_resolution - 1e-12)
            details[_config(report)] = distance
            worst = max(worst, excess)
        return worst, {"argmin_distance_to_uniform": details}


@Claim.factory.register()
class BoundArgmaxVertex(Claim):
    id = "bounds.argmax-vertex"
    suite = Suite.BOUNDS
    description = "the grid maximizer of Σ_k L(e_k, ·) is a tuple of distinct one-hot vertices (JS, GJS)"
    tolerance = 0.0

    def measure(self):
        failures = []
        for report in _grid_reports(self.seed, self.quick):
            if not report.argmax_at_vertices:
                failures.append({"config": _config(report), "argmax": report.argmax_point})
        return len(failures), {"failures": failures}


@Claim.factory.register()
class BoundClosedForm(Claim):
    id = "bounds.closed-form"
    suite = Suite.BOUNDS
    description = "JS bound constants match B_L = K·JS(e_1, u)/Z and B_U = (K-1)(1 + h(π₁)/h(1-π₁))"
    tolerance = 1e-9

    def measure(self):
        worst = 0.0
        details = {}
        for K in range(2, 11):
            for pi1 in (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95):
                for z_mode in ZMode:
                    spec = LossSpec(LossKind.JS, pi1=pi1, z_mode=z_mode)
                    observed = bound_constants(spec, K)
                    expected = js_bound_closed_form(pi1, K, z_mode)
                    deviation = max(abs(a - b) for a, b in zip(observed, expected))
                    if deviation > worst:
                        worst = deviation
                        details = {
                            "K": K,
                            "pi1": pi1,
                            "z_mode": z_mode,
                            "observed": observed,
                            "expected": expected,
                        }
        return worst, {"worst_case": details}


@Claim.factory.register()
class BoundLimitGap(Claim):
    id = "bounds.limit-gap-decreasing"
    suite = Suite.BOUNDS
    description = "the JS bound gap B_U - B_L strictly decreases as π₁ → 1"
    tolerance = 0.0

    def measure(self):
        failures = 0
        gaps = {}
        for K in range(2, 6):
            sequence = []
            for pi1 in MAE_LADDER:
                b_lower, b_upper = bound_constants(LossSpec(LossKind.JS, pi1=pi1), K)
                sequence.append(b_upper - b_lower)
            failures += sum(1 for a, b in zip(sequence, sequence[1:]) if not b < a)
            gaps[f"K={K}"] = sequence
        return failures, {"ladder": MAE_LADDER, "gaps": gaps}


@Claim.factory.register()
class BoundLimitConstants(Claim):
    id = "bounds.limit-constants"
    suite = Suite.BOUNDS
    description = "at π₁ = 1-1e-6 both JS bound constants lie within 1.01(K-1)/|ln(1-π₁)| of K-1"
    tolerance = 1.01

    def measure(self):
        pi1 = MAE_LADDER[-1]
        worst = 0.0
        details = {}
        for K in range(2, 11):
            b_lower, b_upper = bound_constants(LossSpec(LossKind.JS, pi1=pi1), K)
            scale = (K - 1) / abs(math.log1p(-pi1))
            ratio = max(abs(b_lower - (K - 1)), abs(b_upper - (K - 1))) / scale
            details[f"K={K}"] = {"b_lower": b_lower, "b_upper": b_upper, "ratio": ratio}
            worst = max(worst, ratio)
        return worst, {"pi1": pi1, "per_K": details}


@Claim.factory.register()
class BoundGapVsM(Claim):
    id = "bounds.gap-vs-M"
    suite = Suite.BOUNDS
    description = "the GJS bound gap strictly increases with M"
    tolerance = 0.0

    def measure(self):
        failures = 0
        gaps = {}
        for K in (3, 4):
            for pi1 in PI1_VALUES:
                sequence = bound_gap_vs_M(pi1, K, [2, 3, 4])
                values = [gap for _, gap in sequence]
                failures += sum(1 for a, b in zip(values, values[1:]) if not b > a)
                gaps[f"K={K} π₁={pi1}"] = values
        return failures, {"M": [2, 3, 4], "gaps": gaps}


@Claim.factory.register()
class BoundConsistencyShare(Claim):
    id = "bounds.consistency-share"
    suite = Suite.BOUNDS
    description = "the consistency term contributes K(1-π₁)ln(M-1)/Z of the GJS B_U"
    tolerance = 1e-10

    def measure(self):
        worst = 0.0
        for K in range(2, 6):
            for M in (3, 4):
                if M - 1 > K:
                    continue
                for pi1 in PI1_VALUES:
                    spec = LossSpec(LossKind.GJS, pi1=pi1, M=M)
                    js_total, consistency_total = upper_bound_from_decomposition(spec, K)
                    _, b_upper = bound_constants(spec, K)
                    share = upper_bound_consistency_share(pi1, K, M)
                    worst = max(
                        worst,
                        abs(consistency_total - share),
                        abs(js_total + consistency_total - b_upper),
                    )
        return worst, {}


# --- decomposition -------------------------------------------------------------


@Claim.factory.register()
class DecompositionAdditivity(Claim):
    id = "decomposition.additivity"
    suite = Suite.DECOMPOSITION
    description = "GJS equals its JS term plus its consistency term"
    tolerance = 1e-10

    def measure(self):
        cases = self.budget(10_000, 1_000)
        rng = _rng(self.seed, "decomposition")
        worst = 0.0
        for _ in range(cases):
            M = int(rng.integers(3, 6))
            K = int(rng.integers(2, 11))
            pi1 = float(rng.uniform(0.05, 0.95))
            label = int(rng.integers(0, K))
            w = gjs_weights(pi1, M)
            preds = random_simplex(rng, M - 1, K)
            js_term, consistency_term = decompose_gjs(w, one_hot(label, K), preds)
            reference = oracle_gjs(w.tolist(), [one_hot(label, K).tolist()] + preds.tolist())
            worst = max(worst, abs(reference - (js_term + consistency_term)))
        return worst, {"cases": cases}


@Claim.factory.register()
class JsOnMeanBelowGjs(Claim):
    id = "decomposition.js-on-mean-below-gjs"
    suite = Suite.DECOMPOSITION
    description = "the JS-on-mean loss never exceeds the GJS loss"
    tolerance = 1e-12

    def measure(self):
        cases = self.budget(10_000, 1_000)
        rng = _rng(self.seed, "js-on-mean")
        worst = 0.0
        for M in (3, 4, 5):
            for K in (2, 5, 10):
                pi1 = float(rng.uniform(0.05, 0.95))
                labels = rng.integers(0, K, size=cases)
                probs = random_simplex(rng, cases * (M - 1), K).reshape(cases, M - 1, K)
                gjs = loss_values(LossSpec(LossKind.GJS, pi1=pi1, M=M), labels, probs)
                on_mean = loss_values(LossSpec(LossKind.JS_ON_MEAN, pi1=pi1, M=M), labels, probs)
                worst = max(worst, float(np.max(on_mean - gjs)))
        return max(0.0, worst), {"cases_per_config": cases}


@Claim.factory.register()
class EntropyVsKlForm(Claim):
    id = "decomposition.entropy-vs-kl-form"
    suite = Suite.DECOMPOSITION
    description = "the entropy and weighted-KL forms of JS and GJS agree"
    tolerance = 1e-10

    def measure(self):
        cases = self.budget(10_000, 1_000)
        rng = _rng(self.seed, "kl-form")
        worst = 0.0
        for M in (2, 3, 5):
            for K in (2, 4, 10):
                w = random_simplex(rng, 1, M, min_entry=0.01)[0]
                ps = random_simplex(rng, cases * M, K).reshape(cases, M, K)
                worst = max(worst, float(np.max(np.abs(gjs_div(w, ps) - gjs_div_kl_form(w, ps)))))
                if M == 2:
                    forms = js_div(w, ps[:, 0], ps[:, 1]), js_div_kl_form(w, ps[:, 0], ps[:, 1])
                    worst = max(worst, float(np.max(np.abs(forms[0] - forms[1]))))
        return worst, {"cases_per_config": cases}


@Claim.factory.register()
class FDivergenceForm(Claim):
    id = "decomposition.f-divergence-form"
    suite = Suite.DECOMPOSITION
    description = "JS equals Σ_k q_k f_π₁(p_k/q_k)"
    tolerance = 1e-9

    def measure(self):
        cases = self.budget(2_000, 200)
        rng = _rng(self.seed, "f-divergence")
        worst = 0.0
        for _ in range(cases):
            K = int(rng.integers(2, 11))
            pi1 = float(rng.uniform(0.05, 0.95))
            p1, p2 = random_simplex(rng, 2, K, min_entry=1e-3)
            w = [pi1, 1.0 - pi1]
            worst = max(worst, abs(js_div(w, p1, p2) - js_f_divergence(w, p1.tolist(), p2.tolist())))
        return worst, {"cases": cases}


@Claim.factory.register()
class GjsBelowWeightEntropy(Claim):
    id = "decomposition.gjs-below-entropy-of-weights"
    suite = Suite.DECOMPOSITION
    description = "GJS_π never exceeds H(π)"
    tolerance = 1e-12

    def measure(self):
        cases = self.budget(100_000, 5_000)
        rng = _rng(self.seed, "gjs-upper")
        worst = -math.inf
        configs = [(M, K) for M in (2, 3, 4, 5) for K in (2, 3, 5, 10)]
        per_config = cases // len(configs) + 1
        for M, K in configs:
            w = random_simplex(rng, 1, M, min_entry=0.01)[0]
            ps = random_simplex(rng, per_config * M, K).reshape(per_config, M, K)
            worst = max(worst, float(np.max(gjs_div(w, ps))) - float(entropy(w)))
            # distinct vertices attain the bound when M ≤ K
            if M <= K:
                vertices = np.eye(K)[:M]
                worst = max(worst, float(gjs_div(w, vertices)) - oracle_entropy(w.tolist()))
        return max(0.0, worst), {"cases": per_config * len(configs)}


# --- gradients ----------------------------------------------------------------


@Claim.factory.register()
class JsGradientClosedForm(Claim):
    id = "gradients.js-closed-form"
    suite = Suite.GRADIENTS
    description = "the closed-form JS logit gradient matches central differences (h = 1e-5)"
    tolerance = 1e-6

    def measure(self):
        cases = self.budget(1_000, 100)
        rng = _rng(self.seed, "js-gradient")
        worst = 0.0
        for _ in range(cases):
            K = int(rng.integers(2, 11))
            pi1 = float(rng.uniform(0.01, 0.99))
            label = int(rng.integers(0, K))
            spec = LossSpec(LossKind.JS, pi1=pi1)
            z = random_logits(rng, 1, K)
            numeric = finite_diff_grad(loss_evaluator(spec, label), z, 1e-5)[0]
            worst = max(worst, relative_error(grad_js_logits(spec, label, z[0]), numeric))
        return worst, {"cases": cases}


@Claim.factory.register()
class JsGradientChainRule(Claim):
    id = "gradients.closed-vs-chain"
    suite = Suite.GRADIENTS
    description = "the closed-form JS gradient equals the chain-rule gradient"
    tolerance = 1e-12

    def measure(self):
        cases = self.budget(10_000, 1_000)
        rng = _rng(self.seed, "js-chain")
        worst = 0.0
        for _ in range(cases):
            K = int(rng.integers(2, 11))
            spec = LossSpec(LossKind.JS, pi1=float(rng.uniform(0.01, 0.99)))
            label = int(rng.integers(0, K))
            z = random_logits(rng, 1, K)[0]
            chain = grad_loss_logits(spec, label, [z])[0]
            worst = max(worst, relative_error(grad_js_logits(spec, label, z), chain))
        return worst, {"cases": cases}


def _gradient_specs() -> List[LossSpec]:
    specs = [
        LossSpec(LossKind.JS, pi1=0.5),
        LossSpec(LossKind.GJS, pi1=0.5, M=3),
        LossSpec(LossKind.GJS, pi1=0.3, M=4, z_mode=ZMode.UNIT),
        LossSpec(LossKind.JS_ON_MEAN, pi1=0.5, M=3),
    ]
    for kind in LossKind:
        if not kind.divergence_based:
            specs.append(LossSpec(kind))
    return specs


@Claim.factory.register()
class AllLossGradients(Claim):
    id = "gradients.all-kinds"
    suite = Suite.GRADIENTS
    description = "every loss kind's logit gradient matches central differences"
    tolerance = 1e-6

    def measure(self):
        cases = self.budget(200, 20)
        per_kind = {}
        for i, spec in enumerate(_gradient_specs()):
            report = check_loss_gradients(
                spec,
                cases=cases,
                h=1e-5,
                seed=derive_seed(self.seed, "all-kinds", i),
                random_pi1=spec.kind.divergence_based,
            )
            per_kind[f"{spec.kind} M={spec.M} {spec.z_mode}"] = report.worst_relative_error
        return max(per_kind.values()), {"cases_per_kind": cases, "per_kind": per_kind}


@Claim.factory.register()
class ModelGradients(Claim):
    id = "gradients.model"
    suite = Suite.GRADIENTS
    description = "backpropagation through a 2-4-3 model matches central differences for every loss kind"
    tolerance = 1e-5

    def measure(self):
        rng = _rng(self.seed, "model-gradient")
        model = init_model([2, 4, 3], derive_seed(self.seed, "model-gradient"))
        per_kind = {}
        for spec in _gradient_specs():
            features = rng.normal(size=(5, spec.num_preds, 2))
            labels = rng.integers(0, 3, size=5)
            per_kind[f"{spec.kind} M={spec.M}"] = check_model_gradients(
                model, features, labels, spec
            )
        return max(per_kind.values()), {"per_kind": per_kind}


# --- limits -------------------------------------------------------------------


@lru_cache(maxsize=8)
def _limit_probe(kind: LimitKind, seed: int, quick: bool) -> LimitProbeReport:
    return limit_convergence_probe(kind, trials=1_000 if quick else 10_000, seed=seed)


class _LimitMonotone(Claim):
    kind: LimitKind
    tolerance = 0.0

    def measure(self):
        report = _limit_probe(self.kind, self.seed, self.quick)
        return max(0.0, report.worst_increase), {"rungs": report.rungs}


class _LimitFinal(Claim):
    kind: LimitKind

    def threshold(self, report: LimitProbeReport) -> float:
        return 1.0

    def measure(self):
        report = _limit_probe(self.kind, self.seed, self.quick)
        return report.final_deviation / self.threshold(report), {
            "final_deviation": report.final_deviation,
            "threshold": self.threshold(report),
        }


@Claim.factory.register()
class CeLimitMonotone(_LimitMonotone):
    id = "limits.ce-monotone"
    suite = Suite.LIMITS
    kind = LimitKind.CE_LIMIT
    description = "the relative deviation of JS from CE shrinks monotonically as π₁ → 0"


@Claim.factory.register()
class CeLimitFinal(_LimitFinal):
    id = "limits.ce-final"
    suite = Suite.LIMITS
    kind = LimitKind.CE_LIMIT
    description = "at π₁ = 1e-4 JS deviates from CE by less than 1% (value: deviation / 1%)"
    tolerance = 1.0

    def threshold(self, report):
        return 0.01


@Claim.factory.register()
class MaeLimitMonotone(_LimitMonotone):
    id = "limits.mae-monotone"
    suite = Suite.LIMITS
    kind = LimitKind.MAE_LIMIT
    description = "the deviation of JS from MAE shrinks monotonically as π₁ → 1"


@Claim.factory.register()
class MaeLimitFinal(_LimitFinal):
    id = "limits.mae-final"
    suite = Suite.LIMITS
    kind = LimitKind.MAE_LIMIT
    description = "at π₁ = 1-1e-6 JS deviates from MAE by at most 0.7/|ln(1-π₁)| (value: deviation / threshold)"
    tolerance = 1.0

    def threshold(self, report):
        return mae_limit_threshold(report.rungs[-1][0])


@Claim.factory.register()
class GjsMaeLimitMonotone(_LimitMonotone):
    id = "limits.gjs-mae-monotone"
    suite = Suite.LIMITS
    kind = LimitKind.GJS_MAE_LIMIT
    description = "the deviation of GJS from MAE on the mean prediction shrinks monotonically as π₁ → 1"


@Claim.factory.register()
class GjsMaeLimitFinal(_LimitFinal):
    id = "limits.gjs-mae-final"
    suite = Suite.LIMITS
    kind = LimitKind.GJS_MAE_LIMIT
    description = "at π₁ = 1-1e-6 GJS deviates from MAE on the mean prediction by at most (0.7 + ln(M-1))/|ln(1-π₁)|"
    tolerance = 1.0

    def threshold(self, report):
        return mae_limit_threshold(report.rungs[-1][0], report.M)


# --- risk theorem -----------------------------------------------------------------


@Claim.factory.register()
class RiskJsInequalities(Claim):
    id = "risk-theorem.js-inequalities"
    suite = Suite.RISK_THEOREM
    description = "under symmetric noise, both risk gaps of JS stay within η(B_U-B_L)-scaled bounds"
    tolerance = 1e-9

    def measure(self):
        corpus = regression_corpus(self.seed, self.budget(20, 4))
        worst = 0.0
        gaps: List[Dict[str, Any]] = []
        for pi1 in (0.5, 0.9):
            spec = LossSpec(LossKind.JS, pi1=pi1)
            for i, inst in enumerate(corpus):
                result = risk_bound_enumeration(inst, spec)
                worst = max(worst, result.worst_violation())
                gaps.append({"instance": i, "pi1": pi1, **result._asdict()})
        return worst, {"instances": len(corpus), "gaps": gaps}


@Claim.factory.register()
class RiskMaeZeroGap(Claim):
    id = "risk-theorem.mae-zero-gap"
    suite = Suite.RISK_THEOREM
    description = "MAE has zero noisy and clean risk gaps"
    tolerance = 1e-12

    def measure(self):
        corpus = regression_corpus(self.seed, self.budget(20, 4))
        worst = 0.0
        for inst in corpus:
            result = risk_bound_enumeration(inst, LossSpec(LossKind.MAE))
            worst = max(worst, abs(result.noisy_gap), abs(result.clean_gap))
        return worst, {"instances": len(corpus)}


@Claim.factory.register()
class RiskCeRefused(Claim):
    id = "risk-theorem.ce-refused"
    suite = Suite.RISK_THEOREM
    description = "risk enumeration refuses CE, which has no finite B_U"
    tolerance = 0.0

    def measure(self):
        inst = regression_corpus(self.seed, 1)[0]
        try:
            risk_bound_enumeration(inst, LossSpec(LossKind.CE))
        except UnboundedLossError as e:
            return 0.0, {"message": str(e)}
        return 1.0, {"message": "CE was accepted"}


# --- asymmetric-noise conditions ------------------------------------------------


@Claim.factory.register()
class AsymConstants(Claim):
    id = "asym-conditions.constants"
    suite = Suite.ASYM_CONDITIONS
    description = "C1 = H(π) and C2 = h(π₁) + h(1-π₁), with C1 = C2 for M = 2"
    tolerance = 1e-12

    def measure(self):
        worst = 0.0
        cases = []
        for M in (2, 3, 4, 5):
            for pi1 in PI1_VALUES + (1.0 / M,):
                report = asym_condition_check(
                    LossSpec(LossKind.GJS, pi1=pi1, M=M), K=3, samples=10
                )
                weights = gjs_weights(pi1, M).tolist()
                deviation = max(
                    abs(report.C1 - oracle_entropy(weights)),
                    abs(report.C2 - (h(pi1) + h(1.0 - pi1))),
                    abs(report.C1 - report.C2) if M == 2 else 0.0,
                )
                cases.append({"M": M, "pi1": pi1, "C1": report.C1, "C2": report.C2})
                worst = max(worst, deviation)
        return worst, {"cases": cases}


@Claim.factory.register()
class AsymConditions(Claim):
    id = "asym-conditions.conditions"
    suite = Suite.ASYM_CONDITIONS
    description = "GJS is zero only at the label, bounded by C1, and equal to C2 on wrong one-hots"
    tolerance = 1e-9

    def measure(self):
        samples = self.budget(100_000, 5_000)
        worst = 0.0
        violations = {}
        for K, M in ((3, 2), (3, 3), (4, 3), (4, 4)):
            for pi1 in PI1_VALUES:
                report = asym_condition_check(
                    LossSpec(LossKind.GJS, pi1=pi1, M=M),
                    K=K,
                    samples=samples,
                    seed=self.seed,
                )
                violations[f"K={K} M={M} π₁={pi1}"] = report.violations
                worst = max(worst, report.max_violation)
        return worst, {"samples": samples, "violations": violations}

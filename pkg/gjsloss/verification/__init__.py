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
The Verification Module
-----------------------

Reference oracles and searches that check the robustness, decomposition,
gradient and limit properties of the losses, packaged as claims that can be
run by suite.
"""
from .oracles import (
    oracle_entropy,
    oracle_kl,
    oracle_mixture,
    oracle_gjs,
    oracle_z,
    oracle_js_loss,
    js_f,
    js_f_divergence,
    h,
)
from .errors import (
    ResourceCapExceeded,
    UnboundedLossError,
    InvalidBoundRequest,
    InvalidRiskInstance,
)
from .bounds import (
    EVALUATION_CAP,
    BoundReport,
    bound_constants,
    bound_search,
    bound_gap_vs_M,
    grid_resolution_for,
    js_bound_closed_form,
    upper_bound_consistency_share,
    upper_bound_from_decomposition,
)
from .risk import RiskInstance, RiskGaps, risk_bound_enumeration, regression_corpus
from .asym import AsymConditionReport, asym_condition_check
from .limits import (
    LimitKind,
    LimitProbeReport,
    CE_LADDER,
    MAE_LADDER,
    limit_convergence_probe,
    limit_deviation,
    mae_limit_threshold,
)
from .finite_diff import (
    NonFiniteEvaluation,
    GradientCheckReport,
    finite_diff_grad,
    relative_error,
    loss_evaluator,
    check_loss_gradients,
    check_model_gradients,
)
from .claim import Suite, Claim, ClaimResult
from . import suites
from .report import UnknownSuite, VerificationReport, resolve_selectors, run_suites

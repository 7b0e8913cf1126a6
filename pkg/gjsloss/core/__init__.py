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
The Core Module
---------------

Probability-simplex primitives and the divergence family the losses are built
from.
"""
from .simplex import (
    EPS_PROB,
    InvalidDistribution,
    DimensionMismatch,
    AbsoluteContinuityViolation,
    InvalidClassIndex,
    prob_vec,
    weight_vec,
    logit_vec,
    one_hot,
    uniform,
    entropy,
    kl_div,
    mixture,
    softmax,
    softmax_jacobian_entry,
    softmax_jacobian,
    softmax_vjp,
    stack_distributions,
    clamp_project,
    gjs_weights,
)
from .grid import (
    LatticeTooLarge,
    lattice_size,
    simplex_lattice,
    random_simplex,
    random_logits,
)
from .divergences import (
    DivergenceKind,
    is_bounded,
    is_symmetric,
    js_div,
    js_div_kl_form,
    gjs_div,
    gjs_div_kl_form,
    k_div,
    k_prime_div,
    jeffreys_div,
    divergence,
    check_one_hot,
    decompose_gjs,
)

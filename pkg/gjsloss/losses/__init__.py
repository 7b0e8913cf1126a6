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
The Losses Module
-----------------

JS, GJS and the baseline losses, their analytic logit gradients and the
per-input class sums the robustness bounds are stated in.
"""
from .spec import InvalidLossSpec, LossKind, ZMode, LossSpec, normalizer
from .values import (
    loss_values,
    loss_value,
    loss_js,
    loss_gjs,
    loss_js_on_mean,
    loss_baseline,
    loss_dissection,
    sum_over_classes,
    sum_over_classes_batch,
    bootstrap_target,
    smoothed_target,
    soft_cross_entropy,
)
from .gradients import loss_and_grad, grad_loss_logits, grad_js_logits

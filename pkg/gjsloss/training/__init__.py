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
The Training Module
-------------------

A plain ``numpy`` MLP classifier trained by SGD with Nesterov momentum under
any :class:`gjsloss.losses.LossSpec`.
"""
from .model import InvalidModel, ForwardCache, MlpModel, init_model
from .metrics import (
    CSV_COLUMNS,
    MetricsRecord,
    MetricsWriter,
    evaluate,
    consistency_rate,
    peak_epoch,
    post_peak_correlation,
    read_metrics_jsonl,
)
from .trainer import (
    TrainingError,
    NonFiniteLoss,
    TrainConfig,
    OptimizerState,
    StepResult,
    TrainResult,
    step_schedule,
    model_loss_and_grad,
    train_step,
    train_loop,
)

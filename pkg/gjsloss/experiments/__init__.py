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
The Experiments Module
----------------------

Runs configured training experiments and sweeps inside run directories with
logs, metrics and reproducibility manifests.
"""
from .resources import ResourceTracker
from .experiment import (
    ExperimentError,
    ExperimentException,
    TrainingProgressBar,
    RunResult,
    METRICS_CSV,
    METRICS_JSONL,
    MANIFEST,
    RESOLVED,
    load_source,
    prepare_dataset,
    package_versions,
    run_experiment,
)
from .sweep import (
    SweepAxis,
    SweepPoint,
    SweepResult,
    SWEEP_SUMMARY,
    SUMMARY_COLUMNS,
    plan_sweep,
    run_sweep,
)
from .benchmark import (
    BENCHMARK_CONFIG,
    BENCHMARK_LOSSES,
    CALIBRATION,
    AcceptanceCheck,
    BenchmarkEntry,
    BenchmarkResult,
    check_acceptance,
    run_benchmark,
)
from .cli import cloup_experiment_opts, USAGE_ERROR

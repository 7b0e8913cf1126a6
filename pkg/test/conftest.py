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
import os
import tempfile
from unittest import mock
from typing import Optional

import pytest
from _pytest.fixtures import SubRequest
from pyfakefs.fake_filesystem_unittest import Patcher

from gjsloss.common import GenericDict


def pytest_assertrepr_compare(op, left, right):
    if isinstance(left, GenericDict) and isinstance(right, GenericDict) and op == "==":
        return_value = ["comparing GenericDict-derived objects"]
        left_d = left.to_raw_dict()
        right_d = right.to_raw_dict()

        for key in set(left_d.keys()).union(right_d.keys()):
            if left_d.get(key) != right_d.get(key):
                return_value.append(
                    f"  * mismatched values for '{key}': {repr(left_d.get(key))} vs. {repr(right_d.get(key))}"
                )
        return return_value


class chdir(object):
    def __init__(self, path):
        self.path = path
        self.previous = None

    def __enter__(self):
        self.previous = os.getcwd()
        os.chdir(self.path)

    def __exit__(self, exc_type, exc_value, traceback):
        os.chdir(self.previous)
        if exc_type is not None:
            raise exc_value


@pytest.fixture
def _chdir_tmp(request: SubRequest):
    keep_tmp = request.config.getoption("--keep-tmp")

    if not keep_tmp:
        with tempfile.TemporaryDirectory(prefix="gjsloss_test_") as dir, chdir(dir):
            yield dir
    else:
        dir = tempfile.mkdtemp(prefix="gjsloss_test_")
        with chdir(dir):
            print(f"\nTMP: {dir}")
            yield dir
            print(f"\nTMP: {dir}")


@pytest.fixture
def _mock_fs():
    with Patcher() as patcher:
        patcher.fs.create_dir("/cwd")
        os.chdir("/cwd")
        yield patcher.fs


SMALL_BLOBS_CONFIG = {
    "meta": {"version": 1},
    "LOSS_KIND": "GJS",
    "PI1": 0.5,
    "M": 3,
    "DATASET": "blobs",
    "BLOBS_CLASSES": 3,
    "BLOBS_PER_CLASS": 40,
    "BLOBS_DIM": 2,
    "VAL_FRACTION": 0.25,
    "NOISE_ETA": 0.2,
    "JITTER_SIGMA": 0.1,
    "EPOCHS": 3,
    "BATCH_SIZE": 16,
    "LR": 0.05,
    "HIDDEN_WIDTHS": [8],
    "SEED": 7,
    "OUTPUT_DIR": "runs",
}


@pytest.fixture
def small_blobs_config():
    return dict(SMALL_BLOBS_CONFIG)


class MockProgress(object):
    def __init__(self, *args, **kwargs):
        self.add_task_called_count = 0
        self.start_called_count = 0
        self.stop_called_count = 0
        self.update_called_count = 0
        self.total = 100
        self.completed = 0
        self.description = "Progress"

    def add_task(self, *args, total: Optional[int] = None, **kwargs):
        self.add_task_called_count += 1
        if total is not None:
            self.total = total
        return self.add_task_called_count

    def start(self):
        self.start_called_count += 1

    def stop(self):
        self.stop_called_count += 1

    def update(
        self,
        _,
        description: Optional[str] = None,
        total: Optional[int] = None,
        completed: Optional[float] = None,
    ):
        if total_epochs := total:
            self.total = total_epochs

        if completed_epochs := completed:
            self.completed = completed_epochs

        if current_task_description := description:
            self.description = current_task_description

        self.update_called_count += 1


@pytest.fixture(autouse=True)
def _mock_progress():
    from gjsloss.experiments import experiment

    with mock.patch.object(experiment, "Progress", MockProgress):
        yield


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "benchmark: slow full-budget runs, enabled with --run-benchmarks"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-benchmarks"):
        return
    skip = pytest.mark.skip(reason="needs --run-benchmarks")
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip)


def pytest_addoption(parser):
    parser.addoption("--keep-tmp", action="store_true", default=False)
    parser.addoption("--run-benchmarks", action="store_true", default=False)

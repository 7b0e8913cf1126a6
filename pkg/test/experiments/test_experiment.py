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
import csv
import json

import numpy as np
import pytest


def _read_csv(path):
    with open(path, encoding="utf8") as f:
        return list(csv.DictReader(f))


@pytest.mark.usefixtures("_chdir_tmp")
def test_run_experiment(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import (
        MANIFEST,
        METRICS_CSV,
        METRICS_JSONL,
        RESOLVED,
        run_experiment,
    )
    from gjsloss.training import read_metrics_jsonl

    exp = ExperimentConfig.load(small_blobs_config)
    result = run_experiment(exp, tag="first")

    assert result.run_dir == os.path.abspath(os.path.join("runs", "first"))
    for name in (
        RESOLVED,
        METRICS_CSV,
        METRICS_JSONL,
        MANIFEST,
        "experiment.log",
        "warning.log",
        "error.log",
    ):
        assert os.path.isfile(os.path.join(result.run_dir, name)), f"{name} missing"

    assert [r.epoch for r in result.records] == [1, 2, 3]
    assert len(_read_csv(os.path.join(result.run_dir, METRICS_CSV))) == 3
    assert read_metrics_jsonl(os.path.join(result.run_dir, METRICS_JSONL)) == result.records

    with open(os.path.join(result.run_dir, MANIFEST), encoding="utf8") as f:
        manifest = json.load(f)
    for key in ("config", "loss", "seeds", "data", "versions", "resources", "metrics"):
        assert key in manifest, f"manifest lacks '{key}'"
    assert manifest["seeds"]["master"] == 7
    assert manifest["seeds"]["derived"] == exp.derived_seeds()
    assert manifest["loss"]["kind"] == "GJS" and manifest["loss"]["M"] == 3
    assert manifest["data"]["splits"]["train"] == 90, "unexpected training rows"
    assert manifest["data"]["noise"]["eta"] == 0.2
    assert 0 < manifest["data"]["realized_noise"]["changed_fraction"] < 0.5
    assert manifest["metrics"]["epochs"] == 3
    assert manifest["metrics"]["final_val_acc"] == result.final_val_acc
    assert manifest["versions"]["gjsloss"]

    with open(os.path.join(result.run_dir, RESOLVED), encoding="utf8") as f:
        resolved = json.load(f)
    assert resolved["LOSS_KIND"] == "GJS" and resolved["meta"]["version"] == 1


@pytest.mark.usefixtures("_chdir_tmp")
def test_run_experiment_reproducible(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import METRICS_CSV, run_experiment

    exp = ExperimentConfig.load(small_blobs_config)
    a = run_experiment(exp, tag="a")
    b = run_experiment(exp, tag="b")

    rows_a = _read_csv(os.path.join(a.run_dir, METRICS_CSV))
    rows_b = _read_csv(os.path.join(b.run_dir, METRICS_CSV))
    for row in rows_a + rows_b:
        del row["seconds"]
    assert rows_a == rows_b, "identical configurations produced different metrics"
    for pa, pb in zip(a.model.parameters, b.model.parameters):
        np.testing.assert_array_equal(pa, pb)


@pytest.mark.usefixtures("_chdir_tmp")
def test_run_dir_exists(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import ExperimentException, run_experiment

    exp = ExperimentConfig.load(small_blobs_config)
    run_experiment(exp, tag="taken")
    with pytest.raises(ExperimentException, match="already exists"):
        run_experiment(exp, tag="taken")

    result = run_experiment(exp, tag="taken", overwrite=True)
    assert len(result.records) == 3, "overwritten run did not train"

    with open(os.path.join("runs", "file"), "w") as f:
        f.write("")
    with pytest.raises(ExperimentException, match="exists as a file"):
        run_experiment(exp, tag="file", overwrite=True)


@pytest.mark.usefixtures("_chdir_tmp")
def test_run_without_epochs(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import run_experiment

    small_blobs_config["EPOCHS"] = 0
    result = run_experiment(ExperimentConfig.load(small_blobs_config), tag="none")
    assert result.records == []
    assert result.manifest["metrics"] == {"epochs": 0}


def test_prepare_dataset(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.data import Split
    from gjsloss.experiments import prepare_dataset

    ds = prepare_dataset(ExperimentConfig.load(small_blobs_config))
    train = ds.rows(Split.TRAIN)
    held_out = ds.rows(Split.VAL)
    assert len(train) == 90 and len(held_out) == 30
    assert np.array_equal(
        ds.labels[held_out], ds.clean_labels[held_out]
    ), "validation labels were corrupted"
    assert not np.array_equal(ds.labels[train], ds.clean_labels[train]), "no noise injected"


def test_prepare_dataset_without_noise(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import prepare_dataset

    small_blobs_config["NOISE_ETA"] = 0
    ds = prepare_dataset(ExperimentConfig.load(small_blobs_config))
    assert ds.noise is None
    assert np.array_equal(ds.labels, ds.clean_labels)


@pytest.mark.usefixtures("_chdir_tmp")
def test_container_source(small_blobs_config):
    from gjsloss.config import ExperimentConfig
    from gjsloss.data import gen_blobs, save_dataset
    from gjsloss.experiments import ExperimentException, load_source, prepare_dataset

    source = gen_blobs(3, 20, dim=2, seed=1)
    save_dataset(source, "blobs.npz")
    small_blobs_config.update({"DATASET": "container", "DATASET_PATH": "blobs.npz"})
    assert load_source(ExperimentConfig.load(small_blobs_config)).equals(source)

    small_blobs_config.update(
        {"NOISE_KIND": "asymmetric-pairmap", "NOISE_PAIR_MAP": {0: 7}}
    )
    with pytest.raises(ExperimentException, match="out of range"):
        prepare_dataset(ExperimentConfig.load(small_blobs_config))

    np.savez("foreign.npz", features=np.zeros((2, 2)))
    small_blobs_config.update(
        {"DATASET_PATH": "foreign.npz", "NOISE_KIND": "symmetric-resample", "NOISE_PAIR_MAP": None}
    )
    with pytest.raises(ExperimentException, match="Could not load the container dataset"):
        load_source(ExperimentConfig.load(small_blobs_config))


def test_resource_tracker():
    from gjsloss.experiments import ResourceTracker

    with ResourceTracker(interval=0.01) as tracker:
        np.ones((256, 256)).sum()
    stats = tracker.stats_as_dict()
    assert not tracker.is_alive(), "tracker thread outlived the block"
    assert stats["peak_memory_rss"] > 0
    assert stats["peak_threads"] >= 1
    assert stats["runtime_seconds"] >= 0
    assert stats["runtime"].count(":") == 2


def test_package_versions():
    from gjsloss import __version__
    from gjsloss.experiments import package_versions

    versions = package_versions()
    assert versions["gjsloss"] == __version__
    assert {"python", "numpy", "psutil"} <= set(versions)

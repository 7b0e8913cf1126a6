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
import json
import math
import tempfile

import pytest


def _entry(name, peak, final, correlation=math.nan):
    from gjsloss.experiments import BenchmarkEntry

    return BenchmarkEntry(
        name=name,
        run=name,
        peak_test_acc=peak,
        final_test_acc=final,
        peak_epoch=0,
        post_peak_correlation=correlation,
        seconds=1.0,
    )


def test_entry_from_records():
    from gjsloss.experiments import BenchmarkEntry, ExperimentException
    from gjsloss.training import MetricsRecord

    def record(epoch, accuracy, consistency):
        return MetricsRecord(epoch, 0.0, 0.0, 0.0, accuracy, consistency, 0.0, test_acc=accuracy)

    records = [
        record(1, 0.5, 0.95),
        record(2, 0.8, 0.9),
        record(3, 0.7, 0.8),
        record(4, 0.6, 0.7),
        record(5, 0.65, 0.75),
    ]
    entry = BenchmarkEntry.from_records("CE", "runs/CE", records, seconds=2.0)
    assert entry.peak_epoch == 1
    assert entry.peak_test_acc == pytest.approx(0.8)
    assert entry.final_test_acc == pytest.approx(0.65)
    assert entry.drop == pytest.approx(0.15)
    assert entry.post_peak_correlation == pytest.approx(1.0), "linear tail not detected"

    flat = BenchmarkEntry.from_records("CE", "runs/CE", [record(1, 0.7, 1.0), record(2, 0.7, 1.0)], 0.0)
    assert flat.peak_epoch == 0, "ties go to the earliest epoch"
    assert flat.to_dict()["post_peak_correlation"] is None

    without_test = [MetricsRecord(1, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0)]
    with pytest.raises(ExperimentException, match="TEST_FRACTION"):
        BenchmarkEntry.from_records("CE", "runs/CE", without_test, 0.0)
    with pytest.raises(ExperimentException, match="no test accuracy"):
        BenchmarkEntry.from_records("CE", "runs/CE", [], 0.0)


def test_check_acceptance():
    from gjsloss.experiments import check_acceptance

    entries = {
        "CE": _entry("CE", 0.8, 0.7, correlation=0.8),
        "GJS": _entry("GJS", 0.85, 0.84),
        "JS": _entry("JS", 0.8, 0.79),
        "JS-on-mean": _entry("JS-on-mean", 0.82, 0.8),
        "KL": _entry("KL", 0.8, 0.7),
        "Jeffreys": _entry("Jeffreys", 0.8, 0.74),
    }
    checks = check_acceptance(entries)
    assert [c.id for c in checks] == [
        "ce-overfits",
        "ce-consistency-correlation",
        "gjs-stable",
        "gjs-beats-ce",
        "kl-overfits",
        "jeffreys-overfits",
        "js-stable",
        "gjs-vs-js-on-mean",
    ]
    assert all(c.passed for c in checks), [c.id for c in checks if not c.passed]

    entries["GJS"] = _entry("GJS", 0.85, 0.74)
    entries["CE"] = _entry("CE", 0.8, 0.7)
    failed = {c.id: c for c in check_acceptance(entries) if not c.passed}
    assert set(failed) == {"gjs-stable", "gjs-beats-ce", "gjs-vs-js-on-mean", "ce-consistency-correlation"}
    assert failed["ce-consistency-correlation"].observed is None, "nan correlation was reported"


def test_check_acceptance_subset():
    from gjsloss.experiments import check_acceptance

    checks = check_acceptance({"CE": _entry("CE", 0.8, 0.79, correlation=0.9)})
    assert [c.id for c in checks] == ["ce-overfits", "ce-consistency-correlation"]
    assert [c.passed for c in checks] == [False, True]
    assert check_acceptance({}) == []


def test_unknown_benchmark_loss(small_blobs_config):
    from gjsloss.experiments import ExperimentException, run_benchmark

    with pytest.raises(ExperimentException, match="unknown benchmark loss"):
        run_benchmark(small_blobs_config, losses=["CE", "MSE"])


def test_bundled_benchmark_config():
    from gjsloss.config import ExperimentConfig
    from gjsloss.experiments import BENCHMARK_CONFIG, BENCHMARK_LOSSES

    for overrides in BENCHMARK_LOSSES.values():
        exp = ExperimentConfig.load(BENCHMARK_CONFIG, overrides=overrides)
        assert exp.train.weight_decay == 0.0
        assert exp.train.views.jitter_sigma > 0.0, "consistency would be constant"
        assert exp.dataset.classes * exp.dataset.per_class == 2000


@pytest.mark.usefixtures("_chdir_tmp")
def test_run_benchmark_writes_calibration(small_blobs_config):
    from gjsloss.experiments import CALIBRATION, run_benchmark

    small_blobs_config["EPOCHS"] = 2
    small_blobs_config["TEST_FRACTION"] = 0.2
    result = run_benchmark(small_blobs_config, losses=["CE", "GJS"], tag="bench")

    assert result.benchmark_dir == os.path.abspath(os.path.join("runs", "bench"))
    assert list(result.entries) == ["CE", "GJS"]
    for name in ["CE", "GJS"]:
        assert os.path.isdir(os.path.join(result.benchmark_dir, name))

    with open(os.path.join(result.benchmark_dir, CALIBRATION), encoding="utf8") as f:
        calibration = json.load(f)
    assert calibration["setting"]["EPOCHS"] == 2
    assert set(calibration["entries"]) == {"CE", "GJS"}
    for entry in calibration["entries"].values():
        assert 0.0 <= entry["final_test_acc"] <= entry["peak_test_acc"] <= 1.0
        assert entry["drop"] >= 0.0
    assert [c["id"] for c in calibration["checks"]] == [
        "ce-overfits",
        "ce-consistency-correlation",
        "gjs-stable",
        "gjs-beats-ce",
    ]
    assert result.passed == all(c["passed"] for c in calibration["checks"])


@pytest.fixture(scope="module")
def calibrated():
    from gjsloss.experiments import BENCHMARK_CONFIG, BENCHMARK_LOSSES, run_benchmark

    # One full run shared by the checks below
    cwd = os.getcwd()
    with tempfile.TemporaryDirectory() as d:
        os.chdir(d)
        try:
            yield run_benchmark(BENCHMARK_CONFIG, jobs=len(BENCHMARK_LOSSES), tag="calibration")
        finally:
            os.chdir(cwd)


@pytest.mark.benchmark
def test_ce_overfits_noisy_labels(calibrated):
    ce = calibrated.entries["CE"]
    assert ce.drop >= 0.05, f"CE peak {ce.peak_test_acc:.4f}, final {ce.final_test_acc:.4f}"


@pytest.mark.benchmark
def test_gjs_keeps_its_peak(calibrated):
    ce, gjs = calibrated.entries["CE"], calibrated.entries["GJS"]
    assert gjs.drop <= 0.02, f"GJS peak {gjs.peak_test_acc:.4f}, final {gjs.final_test_acc:.4f}"
    assert gjs.final_test_acc >= ce.final_test_acc + 0.05, (
        f"GJS final {gjs.final_test_acc:.4f}, CE final {ce.final_test_acc:.4f}"
    )


@pytest.mark.benchmark
def test_ce_consistency_tracks_accuracy(calibrated):
    r = calibrated.entries["CE"].post_peak_correlation
    assert not math.isnan(r), "consistency or accuracy is constant after the peak"
    assert r > 0.5, f"r = {r:.4f}"


@pytest.mark.benchmark
def test_unbounded_divergences_overfit(calibrated):
    for name in ["KL", "Jeffreys"]:
        entry = calibrated.entries[name]
        assert entry.drop >= 0.05, f"{name} peak {entry.peak_test_acc:.4f}, final {entry.final_test_acc:.4f}"
    js = calibrated.entries["JS"]
    assert js.drop <= 0.02, f"JS peak {js.peak_test_acc:.4f}, final {js.final_test_acc:.4f}"


@pytest.mark.benchmark
def test_gjs_not_below_js_on_mean(calibrated):
    gjs, mean = calibrated.entries["GJS"], calibrated.entries["JS-on-mean"]
    assert gjs.final_test_acc >= mean.final_test_acc, (
        f"GJS final {gjs.final_test_acc:.4f}, JS-on-mean final {mean.final_test_acc:.4f}"
    )


@pytest.mark.benchmark
def test_calibration_agrees_with_checks(calibrated):
    from gjsloss.experiments import CALIBRATION

    with open(os.path.join(calibrated.benchmark_dir, CALIBRATION), encoding="utf8") as f:
        calibration = json.load(f)
    assert {c["id"]: c["passed"] for c in calibration["checks"]} == {
        c.id: c.passed for c in calibrated.checks
    }
    assert calibrated.passed, [c.id for c in calibrated.checks if not c.passed]

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

import yaml
import pytest
from click.testing import CliRunner


@pytest.fixture
def runner():
    from gjsloss.logging import reset_log_level

    yield CliRunner()
    reset_log_level()


@pytest.fixture
def config_file(small_blobs_config):
    with open("config.yaml", "w", encoding="utf8") as f:
        yaml.safe_dump(small_blobs_config, f)
    return "config.yaml"


def test_version(runner):
    from gjsloss import __version__
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert f"gjsloss v{__version__}" in result.output


@pytest.mark.usefixtures("_chdir_tmp")
def test_verify_selected_claims(runner):
    from gjsloss.__main__ import cli

    result = runner.invoke(
        cli,
        [
            "verify",
            "--quick",
            "--report",
            "report.json",
            "bounds.closed-form",
            "decomposition.additivity",
        ],
    )
    assert result.exit_code == 0, result.output
    with open("report.json", encoding="utf8") as f:
        report = json.load(f)
    assert report["passed"] is True
    assert [claim["id"] for claim in report["claims"]] == [
        "bounds.closed-form",
        "decomposition.additivity",
    ]
    assert report["quick"] is True


def test_verify_failure_exit_code(runner, monkeypatch):
    from gjsloss.losses import spec
    from gjsloss.__main__ import cli

    original = spec.normalizer
    monkeypatch.setattr(
        spec, "normalizer", lambda pi1, z_mode="normalized": 2.0 * original(pi1, z_mode)
    )
    result = runner.invoke(cli, ["verify", "bounds.closed-form"])
    assert result.exit_code == 1, result.output


def test_verify_unknown_selector(runner):
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["verify", "bounds.nonexistent"])
    assert result.exit_code == 2, result.output


def test_verify_list(runner):
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["verify", "--list"])
    assert result.exit_code == 0, result.output
    assert result.output.strip(), "no claims were listed"


@pytest.mark.usefixtures("_chdir_tmp")
def test_train(runner, config_file):
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["train", config_file, "--tag", "cli"])
    assert result.exit_code == 0, result.output
    assert os.path.isfile(os.path.join("runs", "cli", "manifest.json"))

    result = runner.invoke(cli, ["train", config_file, "--tag", "cli"])
    assert result.exit_code == 2, "an existing run directory was not a usage error"


@pytest.mark.usefixtures("_chdir_tmp")
def test_train_bad_config(runner, small_blobs_config):
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["train", "missing.yaml"])
    assert result.exit_code == 2, "a missing configuration was not a usage error"

    small_blobs_config["NOISE_ETA"] = 1
    with open("bad.yaml", "w", encoding="utf8") as f:
        yaml.safe_dump(small_blobs_config, f)
    result = runner.invoke(cli, ["train", "bad.yaml"])
    assert result.exit_code == 2, result.output
    assert not os.path.exists("runs"), "an invalid configuration created a run"


@pytest.mark.usefixtures("_chdir_tmp")
def test_sweep(runner, config_file):
    from gjsloss.__main__ import cli

    result = runner.invoke(
        cli,
        ["sweep", config_file, "--axis", "pi1", "--tag", "pi", "--values", "0.3,0.7"],
    )
    assert result.exit_code == 0, result.output
    assert os.path.isfile(os.path.join("runs", "pi", "summary.csv"))

    result = runner.invoke(cli, ["sweep", config_file, "--axis", "eta", "--values", "1.5"])
    assert result.exit_code == 2, "an invalid sweep value was not a usage error"

    result = runner.invoke(cli, ["sweep", config_file, "--axis", "pi1", "--values", "0.3,,0.7"])
    assert result.exit_code == 2, "an empty sweep value was not a usage error"


@pytest.mark.usefixtures("_chdir_tmp")
def test_benchmark(runner, small_blobs_config):
    from gjsloss.__main__ import cli

    with open("benchmark.yaml", "w", encoding="utf8") as f:
        yaml.safe_dump({**small_blobs_config, "EPOCHS": 2, "TEST_FRACTION": 0.2}, f)

    result = runner.invoke(cli, ["benchmark", "benchmark.yaml", "--losses", "CE,GJS", "--tag", "b"])
    assert result.exit_code in (0, 1), result.output
    assert os.path.isfile(os.path.join("runs", "b", "calibration.json"))
    assert "gjs-beats-ce" in result.output, "the checks were not printed"

    result = runner.invoke(cli, ["benchmark", "benchmark.yaml", "--losses", "CE,MSE"])
    assert result.exit_code == 2, "an unknown loss was not a usage error"


@pytest.mark.usefixtures("_chdir_tmp")
def test_config_is_positional(runner, config_file):
    from gjsloss.__main__ import cli

    result = runner.invoke(cli, ["noise-inspect", "-c", config_file, "--json"])
    assert result.exit_code == 2, "the configuration is not an option"

    result = runner.invoke(cli, ["noise-inspect", "--json"])
    assert result.exit_code == 2, "a missing configuration path was not a usage error"
    assert "CONFIG_FILE" in result.output, result.output


@pytest.mark.usefixtures("_chdir_tmp")
def test_noise_inspect(runner, config_file):
    from gjsloss.__main__ import cli

    result = runner.invoke(
        cli,
        ["noise-inspect", config_file, "--log-level", "WARNING", "--json", "--save", "noisy.npz"],
    )
    assert result.exit_code == 0, result.output
    stats = json.loads(result.output[result.output.index("{") :])
    assert stats["splits"] == {"train": 90, "val": 30, "test": 0}
    assert stats["rows"] == 90
    assert stats["noise"]["kind"] == "symmetric-resample"
    assert os.path.isfile("noisy.npz"), "--save did not write the container"

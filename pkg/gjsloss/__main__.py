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
import traceback
from textwrap import dedent
from functools import partial
from typing import Optional, Sequence

import click
from cloup import (
    argument,
    group,
    option,
    Path,
)
from rich.table import Table

from .__version__ import __version__
from .common.cli import EnumValueChoice, formatter_settings
from .common import dumps_json
from .config import ExperimentConfig, InvalidConfig, PassedDirectoryError
from .data import noise_statistics, save_dataset, split_sizes
from .experiments import (
    ExperimentError,
    ExperimentException,
    SweepAxis,
    USAGE_ERROR,
    cloup_experiment_opts,
    prepare_dataset,
    run_benchmark,
    run_experiment,
    run_sweep,
)
from .logging import console, debug, err, info, warn
from .verification import Claim, Suite, UnknownSuite, run_suites

FAILURE = 1

o = partial(option, show_default=True)


def print_version(ctx: click.Context, param: click.Parameter, value: bool):
    if not value:
        return

    message = dedent(
        f"""
        gjsloss v{__version__}
        Copyright ©2025 The gjsloss Authors.

        Available under the Apache License, version 2. Included with the source code,
        but you can also get a copy at https://www.apache.org/licenses/LICENSE-2.0
        """
    ).strip()

    print(message)
    ctx.exit(0)


def split_values_cb(
    ctx: click.Context, param: click.Parameter, value: Optional[str]
) -> Sequence[str]:
    if value is None:
        return []
    values = [v.strip() for v in value.split(",")]
    if any(v == "" for v in values):
        raise click.BadParameter(f"empty entry in '{value}'")
    return values


def load_experiment(ctx: click.Context, config_file: str) -> ExperimentConfig:
    try:
        return ExperimentConfig.load(config_file)
    except PassedDirectoryError as e:
        err(e)
        ctx.exit(USAGE_ERROR)
    except InvalidConfig as e:
        report_invalid_config(e)
        ctx.exit(USAGE_ERROR)
    except ValueError as e:
        err(e)
        debug(traceback.format_exc())
        ctx.exit(USAGE_ERROR)
    raise AssertionError("unreachable")


def report_invalid_config(e: InvalidConfig):
    if len(e.warnings) > 0:
        warn("The following warnings have been generated:")
        for warning in e.warnings:
            warn(warning)
    err(f"Errors have occurred while loading {e.config}:")
    for error in e.errors:
        err(error)
    err("gjsloss will now quit. Please check your configuration.")


@group(
    no_args_is_help=True,
    formatter_settings=formatter_settings,
)
@o(
    "--version",
    is_flag=True,
    is_eager=True,
    expose_value=False,
    help="Prints version information and exits",
    callback=print_version,
)
def cli():
    """
    Noise-robust JS/GJS losses: verify their properties numerically, train
    with them under label noise, and sweep their hyperparameters.
    """
    pass


selector_choices = ["all"] + [suite.value for suite in Suite]


@cli.command(formatter_settings=formatter_settings)
@o(
    "--seed",
    type=int,
    default=0,
    help="The master seed every random draw derives from.",
)
@o(
    "--quick",
    is_flag=True,
    default=False,
    help="Shrink sample counts for a smoke run. Tolerances are unchanged.",
)
@o(
    "--report",
    "report_path",
    type=Path(file_okay=True, dir_okay=False),
    default=None,
    help="Write the JSON report to this file.",
)
@o(
    "--list",
    "list_claims",
    is_flag=True,
    default=False,
    help="List the registered claims and exit.",
)
@cloup_experiment_opts(config_file=False, run_options=False)
@argument(
    "selectors",
    nargs=-1,
)
@click.pass_context
def verify(
    ctx: click.Context,
    seed: int,
    quick: bool,
    report_path: Optional[str],
    list_claims: bool,
    jobs: Optional[int],
    selectors: Sequence[str],
):
    """
    Runs verification suites: any of bounds, decomposition, gradients, limits,
    risk-theorem, asym-conditions or all (the default). Single claims may be
    selected by id.

    Exits with 0 if every claim holds within its tolerance and 1 otherwise.
    """
    if list_claims:
        table = Table("Claim", "Suite", "Tolerance", "Description")
        for id in Claim.factory.list():
            claim = Claim.factory.get(id)
            assert claim is not None
            table.add_row(id, str(claim.suite), f"{claim.tolerance:.1e}", claim.description)
        console.print(table)
        ctx.exit(0)

    try:
        report = run_suites(selectors or ["all"], seed=seed, quick=quick)
    except UnknownSuite as e:
        err(e)
        ctx.exit(USAGE_ERROR)

    if report_path is not None:
        with open(report_path, "w", encoding="utf8") as f:
            f.write(report.to_json())
        info(f"Report written to '{report_path}'.")

    ctx.exit(0 if report.passed else FAILURE)


@cli.command(formatter_settings=formatter_settings)
@cloup_experiment_opts()
@click.pass_context
def train(
    ctx: click.Context,
    config_file: str,
    tag: Optional[str],
    overwrite: bool,
    jobs: Optional[int],
):
    """
    Trains a model as configured, writing metrics and a run manifest to a new
    run directory.
    """
    exp = load_experiment(ctx, config_file)
    try:
        result = run_experiment(exp, tag=tag, overwrite=overwrite)
    except ExperimentException as e:
        err(f"The experiment could not start:\n{e}")
        ctx.exit(USAGE_ERROR)
    except ExperimentError as e:
        err(f"The following error was encountered while training:\n{e}")
        ctx.exit(FAILURE)
    info(f"Run directory: '{result.run_dir}'.")


@cli.command(formatter_settings=formatter_settings)
@o(
    "--axis",
    type=EnumValueChoice(SweepAxis),
    required=True,
    help="The hyperparameter to vary.",
)
@o(
    "--values",
    "values",
    required=True,
    callback=split_values_cb,
    help="Comma-separated values of the axis, e.g. 0.1,0.5,0.9.",
)
@cloup_experiment_opts()
@click.pass_context
def sweep(
    ctx: click.Context,
    config_file: str,
    axis: SweepAxis,
    tag: Optional[str],
    overwrite: bool,
    jobs: Optional[int],
    values: Sequence[str],
):
    """
    Runs the configured experiment once per value of one hyperparameter, with
    shared seeds, and writes a summary CSV.
    """
    if overwrite:
        warn("--overwrite has no effect on sweeps: each sweep gets its own directory.")
    try:
        result = run_sweep(config_file, axis, list(values), jobs=jobs or 1, tag=tag)
    except InvalidConfig as e:
        report_invalid_config(e)
        ctx.exit(USAGE_ERROR)
    except ExperimentException as e:
        err(e)
        ctx.exit(USAGE_ERROR)
    except ExperimentError as e:
        err(f"A sweep point failed:\n{e}")
        ctx.exit(FAILURE)

    table = Table(str(axis), "Final val acc", "Best val acc", "Peak epoch", title="Sweep")
    for row in result.rows:
        final, best = row["final_val_acc"], row["best_val_acc"]
        table.add_row(
            str(row["value"]),
            "-" if final is None else f"{final:.4f}",
            "-" if best is None else f"{best:.4f}",
            str(row["peak_epoch"]),
        )
    console.print(table)


@cli.command(formatter_settings=formatter_settings)
@o(
    "--losses",
    "losses",
    default=None,
    callback=split_values_cb,
    help="Comma-separated subset of CE,GJS,JS,JS-on-mean,KL,Jeffreys. Defaults to all of them.",
)
@cloup_experiment_opts()
@click.pass_context
def benchmark(
    ctx: click.Context,
    config_file: str,
    tag: Optional[str],
    overwrite: bool,
    jobs: Optional[int],
    losses: Sequence[str],
):
    """
    Trains each loss of the noisy-label comparison on the configured setting,
    writes calibration.json and checks the expected orderings.

    Exits with 0 if every check passes and 1 otherwise.
    """
    if overwrite:
        warn("--overwrite has no effect on benchmarks: each benchmark gets its own directory.")
    try:
        result = run_benchmark(config_file, losses=list(losses) or None, jobs=jobs or 1, tag=tag)
    except InvalidConfig as e:
        report_invalid_config(e)
        ctx.exit(USAGE_ERROR)
    except ExperimentException as e:
        err(e)
        ctx.exit(USAGE_ERROR)
    except ExperimentError as e:
        err(f"A benchmark run failed:\n{e}")
        ctx.exit(FAILURE)

    table = Table("Loss", "Peak test acc", "Final test acc", "Drop", "Peak epoch", title="Benchmark")
    for entry in result.entries.values():
        table.add_row(
            entry.name,
            f"{entry.peak_test_acc:.4f}",
            f"{entry.final_test_acc:.4f}",
            f"{entry.drop:.4f}",
            str(entry.peak_epoch),
        )
    console.print(table)
    checks = Table("Check", "Observed", "Threshold", "Result", title="Checks")
    for check in result.checks:
        checks.add_row(
            check.id,
            "-" if check.observed is None else f"{check.observed:.4f}",
            f"{check.threshold:.4f}",
            "[green]pass" if check.passed else "[red]fail",
        )
    console.print(checks)
    ctx.exit(0 if result.passed else FAILURE)


@cli.command("noise-inspect", formatter_settings=formatter_settings)
@cloup_experiment_opts(run_options=False, jobs=False)
@o(
    "--json",
    "as_json",
    is_flag=True,
    default=False,
    help="Print the statistics as JSON instead of tables.",
)
@o(
    "--save",
    "save_path",
    type=Path(file_okay=True, dir_okay=False),
    default=None,
    help="Also write the split, noisy dataset to this .npz container.",
)
@click.pass_context
def noise_inspect(
    ctx: click.Context,
    config_file: str,
    as_json: bool,
    save_path: Optional[str],
):
    """
    Prepares the configured dataset and prints the realized label noise: the
    changed fraction, the per-class rates and the clean-to-noisy counts.
    """
    exp = load_experiment(ctx, config_file)
    try:
        ds = prepare_dataset(exp)
    except ExperimentException as e:
        err(e)
        ctx.exit(USAGE_ERROR)

    stats = noise_statistics(ds)
    if as_json:
        print(
            dumps_json(
                {
                    "noise": None if ds.noise is None else ds.noise.to_dict(),
                    "splits": split_sizes(ds),
                    **stats.to_dict(),
                }
            )
        )
    else:
        info(
            f"{stats.changed} of {stats.rows} training labels changed ({stats.changed_fraction:.4f}); noise: {ds.noise.kind if ds.noise else 'none'}."
        )
        confusion = Table(
            "clean \\ noisy", *[str(k) for k in range(ds.K)], "rate", title="Training labels"
        )
        for k in range(ds.K):
            confusion.add_row(
                str(k),
                *[str(int(count)) for count in stats.confusion[k]],
                f"{stats.per_class_rate[k]:.4f}",
            )
        console.print(confusion)

    if save_path is not None:
        save_dataset(ds, save_path)
        info(f"Dataset written to '{os.path.abspath(save_path)}'.")


if __name__ == "__main__":
    cli()

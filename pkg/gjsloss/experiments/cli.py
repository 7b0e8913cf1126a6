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
from functools import partial
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Union

from click import (
    Context,
    Parameter,
    echo,
)
from cloup import (
    argument,
    option,
    option_group,
    Path,
)
from cloup.typing import Decorator

from ..common import set_tpe
from ..logging import set_log_level, err, options

USAGE_ERROR = 2


def set_log_level_cb(
    ctx: Context,
    param: Parameter,
    value: Optional[str],
):
    if value is None:
        return

    level: Union[str, int] = value
    try:
        try:
            level = int(value)
        except ValueError:
            pass
        set_log_level(level)
    except ValueError as e:
        err(f"Invalid logging level {value}: {e}.")
        echo(ctx.get_help())
        ctx.exit(USAGE_ERROR)


def set_worker_count_cb(
    ctx: Context,
    param: Parameter,
    value: Optional[int],
):
    if value is None:
        return None
    if value < 1:
        err(f"The worker count must be positive, got {value}.")
        ctx.exit(USAGE_ERROR)
    set_tpe(ThreadPoolExecutor(max_workers=value))
    return value


def condensed_cb(ctx: Context, param: Parameter, value: bool):
    if value:
        options.set_condensed_mode(True)
        options.set_show_progress_bar(False)


def progressbar_cb(ctx: Context, param: Parameter, value: Optional[bool]):
    if value is not None:
        options.set_show_progress_bar(value)


def cloup_experiment_opts(
    *,
    config_file: bool = True,
    run_options: bool = True,
    log_level: bool = True,
    jobs: bool = True,
) -> Decorator:
    """
    Appends the flags shared by gjsloss's subcommands. The decorated function
    receives:

    * ``config_file``: ``str`` (if ``config_file``), the experiment
      configuration, taken as the one positional argument
    * ``tag``: ``Optional[str]`` and ``overwrite``: ``bool`` (if
      ``run_options``)
    * ``jobs``: ``Optional[int]`` (if ``jobs``), which also resizes the
      worker pool used by bound searches and sharded training steps

    Logging flags are handled by callbacks and not passed on.
    """
    o = partial(option, show_default=True)

    def decorate(f):
        if log_level:
            f = option_group(
                "Logging options",
                o(
                    "--log-level",
                    type=str,
                    default=None,
                    expose_value=False,
                    callback=set_log_level_cb,
                    help="A logging level name (e.g. VERBOSE) or number.",
                ),
                o(
                    "--condensed",
                    is_flag=True,
                    default=False,
                    expose_value=False,
                    callback=condensed_cb,
                    help="Condensed log output without a progress bar, for non-interactive use.",
                ),
                o(
                    "--progress-bar/--no-progress-bar",
                    default=None,
                    expose_value=False,
                    callback=progressbar_cb,
                    help="Show or hide the training progress bar.",
                ),
            )(f)
        if jobs:
            f = o(
                "-j",
                "--jobs",
                type=int,
                default=None,
                callback=set_worker_count_cb,
                help="Worker count for parallel chunks and sweep points. Defaults to GJSLOSS_MAX_WORKERS or the CPU count.",
            )(f)
        if run_options:
            f = option_group(
                "Run options",
                o(
                    "--tag",
                    "-t",
                    default=None,
                    help="The run directory's name under OUTPUT_DIR. Defaults to a timestamp.",
                ),
                o(
                    "--overwrite",
                    is_flag=True,
                    default=False,
                    help="Replace an existing run directory with the same tag.",
                ),
            )(f)
        if config_file:
            f = argument(
                "config_file",
                type=Path(exists=True, file_okay=True, dir_okay=False),
                help="A YAML or JSON experiment configuration file.",
            )(f)
        return f

    return decorate

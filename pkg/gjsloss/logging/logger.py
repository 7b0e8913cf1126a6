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
import atexit
import logging
from enum import IntEnum
from typing import ClassVar, Dict, Iterable, Union

import click
import rich.console
import rich.logging
from rich.text import Text
from rich.style import Style, StyleType


class LogLevels(IntEnum):
    ALL = 0
    DEBUG = 10
    VERBOSE = 15
    INFO = 20
    WARNING = 30
    ERROR = 40
    CRITICAL = 50


LOGGER_NAME = "__gjsloss__"
DEFAULT_LEVEL = LogLevels.VERBOSE

console = rich.console.Console()
atexit.register(lambda: rich.console.Console().show_cursor())
_logger: logging.Logger = logging.getLogger(LOGGER_NAME)


class options:
    """
    Process-wide display switches, set by the command-line callbacks.

    Condensed mode shortens level names to one letter and is meant for logs
    captured by CI or sweeps; the progress bar is skipped whenever it is off.
    """

    _condensed_mode: ClassVar[bool] = False
    _show_progress_bar: ClassVar[bool] = True

    @classmethod
    def get_condensed_mode(Self) -> bool:
        return Self._condensed_mode

    @classmethod
    def set_condensed_mode(Self, condensed: bool):
        Self._condensed_mode = condensed

    @classmethod
    def get_show_progress_bar(Self) -> bool:
        return Self._show_progress_bar

    @classmethod
    def set_show_progress_bar(Self, show: bool):
        Self._show_progress_bar = show


class LevelFormatter(logging.Formatter):
    """
    Colors terminal messages by level with rich markup.
    """

    markup: ClassVar[Dict[str, str]] = {
        "WARNING": "[yellow]",
        "ERROR": "[red]",
        "CRITICAL": "[red][bold]",
    }

    def format(self, record: logging.LogRecord) -> str:
        return self.markup.get(record.levelname, "") + record.getMessage()


class PlainFormatter(logging.Formatter):
    """
    Strips rich markup so run log files stay greppable.
    """

    def format(self, record: logging.LogRecord) -> str:
        return Text.from_markup(super().format(record)).plain


class RichHandler(rich.logging.RichHandler):
    def get_level_text(self, record: logging.LogRecord) -> Text:
        if not options.get_condensed_mode():
            return super().get_level_text(record)
        style: StyleType = f"logging.level.{record.levelname.lower()}"
        if record.levelname == "WARNING":
            style = Style(color="yellow", bold=True)
        return Text.styled(f"[{record.levelname[:1]}]", style)


class LevelFilter(logging.Filter):
    """
    Passes only records whose level name is in ``levels``, or only those
    whose level name is not if ``invert`` is set.
    """

    def __init__(self, levels: Iterable[str], invert: bool = False) -> None:
        super().__init__()
        self.levels = frozenset(levels)
        self.invert = invert

    def filter(self, record: logging.LogRecord) -> bool:
        return (record.levelname in self.levels) != self.invert


def initialize_logger():
    for level in LogLevels:
        logging.addLevelName(level.value, level.name)

    terminal = RichHandler(
        console=console,
        rich_tracebacks=True,
        tracebacks_suppress=[click],
        omit_repeated_times=False,
        show_level=True,
        markup=True,
        keywords=[],
    )
    terminal.setFormatter(LevelFormatter("%(message)s", datefmt="[%X]"))

    _logger.setLevel(DEFAULT_LEVEL)
    _logger.handlers.clear()
    _logger.addHandler(terminal)


initialize_logger()


def register_additional_handler(handler: logging.Handler):
    """
    Attaches a handler, e.g. a run directory's log file, to the gjsloss
    logger until :func:`deregister_additional_handler` is called with it.
    """
    _logger.addHandler(handler)


def deregister_additional_handler(handler: logging.Handler):
    _logger.removeHandler(handler)


def set_log_level(lv: Union[str, int]):
    """
    :param lv: A level name such as ``"VERBOSE"`` or a level number.
    :raises ValueError: If the name is unknown.
    """
    _logger.setLevel(lv)


def reset_log_level():
    set_log_level(DEFAULT_LEVEL)


def get_log_level() -> int:
    return _logger.getEffectiveLevel()


def _emit(level: int, msg: object, kwargs: dict):
    # stacklevel 3 skips _emit and the public helper
    kwargs.setdefault("stacklevel", 3)
    _logger.log(level, msg, **kwargs)


def debug(msg: object, /, **kwargs):
    _emit(LogLevels.DEBUG, msg, kwargs)


def verbose(msg: object, /, **kwargs):
    _emit(LogLevels.VERBOSE, msg, kwargs)


def info(msg: object, /, **kwargs):
    _emit(LogLevels.INFO, msg, kwargs)


def success(msg: object, /, **kwargs):
    _emit(LogLevels.INFO, f"[green]{msg}", kwargs)


def warn(msg: object, /, **kwargs):
    _emit(LogLevels.WARNING, f"{msg}", kwargs)


def err(msg: object, /, **kwargs):
    _emit(LogLevels.ERROR, f"{msg}", kwargs)


def rule(title: str = "", /, **kwargs):  # pragma: no cover
    """
    Draws a titled horizontal line on the terminal unless the level is above
    ``INFO``. Kwargs go to :meth:`rich.console.Console.rule`.
    """
    if get_log_level() <= LogLevels.INFO:
        console.rule(title, **kwargs)

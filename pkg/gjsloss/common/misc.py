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
import re
import typing
import hashlib
import pathlib
import unicodedata
from typing import SupportsFloat

MAX_WORKERS_ENV = "GJSLOSS_MAX_WORKERS"


def get_gjsloss_root() -> str:
    """
    Returns the root gjsloss folder, i.e., the folder containing the
    ``__init__.py``.
    """
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def slugify(value: str, lower: bool = False) -> str:
    """
    :param value: Input string
    :returns: The input string with all characters except alphanumerics,
        underscores and hyphens removed, and spaces and dots converted into
        hyphens.
    """
    if lower:
        value = value.lower()
    value = (
        unicodedata.normalize("NFKD", value).encode("ascii", "ignore").decode("ascii")
    )
    value = re.sub(r"[^\w\s\-\.]", "", value).strip()
    return re.sub(r"[\s\.]+", "-", value)


def mkdirp(path: typing.Union[str, os.PathLike]):
    """
    Creates a directory and all of its parents. Does not fail if the directory
    already exists.
    """
    return pathlib.Path(path).mkdir(parents=True, exist_ok=True)


def format_elapsed_time(elapsed_seconds: SupportsFloat) -> str:
    """
    :param elapsed_seconds: Total time elapsed in seconds
    :returns: A string in the format ``{hours}:{minutes}:{seconds}.{milliseconds}``
    """
    elapsed_seconds = float(elapsed_seconds)

    hours = int(elapsed_seconds // 3600)
    leftover = elapsed_seconds % 3600

    minutes = int(leftover // 60)
    leftover = leftover % 60

    seconds = int(leftover // 1)
    milliseconds = int((leftover % 1) * 1000)

    return f"{hours:02}:{minutes:02}:{seconds:02}.{milliseconds:03}"


def derive_seed(master_seed: int, label: str, index: int = 0) -> int:
    """
    Fans a master seed out to an independent 63-bit seed for a named consumer.

    The derivation is a keyed hash of ``label`` and ``index``, so streams for
    different consumers never depend on the order in which they are requested.

    :param master_seed: The experiment's master seed
    :param label: A component name, e.g. ``"noise"`` or ``"search-chunk"``
    :param index: A sub-index, e.g. a chunk or sweep point number
    """
    hasher = hashlib.blake2b(
        f"{label}:{index}".encode("utf8"),
        key=int(master_seed).to_bytes(16, "little", signed=True),
        digest_size=8,
    )
    return int.from_bytes(hasher.digest(), "little") >> 1


def _get_process_limit() -> int:
    return max(1, int(os.getenv(MAX_WORKERS_ENV, os.cpu_count() or 1)))

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

import pytest


@pytest.mark.parametrize(
    ("value", "lower", "expected"),
    [
        ("GJS M=3 sweep", False, "GJS-M3-sweep"),
        ("pi1 0.5", False, "pi1-0-5"),
        ("Noisy CIFAR 40%", True, "noisy-cifar-40"),
        ("café__run", False, "cafe__run"),
    ],
)
def test_slugify(value, lower, expected):
    from gjsloss.common import slugify

    assert slugify(value, lower=lower) == expected, f"unexpected slug for {value!r}"


@pytest.mark.parametrize(
    ("seconds", "expected"),
    [
        (0, "00:00:00.000"),
        (61.5, "00:01:01.500"),
        (3 * 3600 + 7 * 60 + 9.25, "03:07:09.250"),
    ],
)
def test_format_elapsed_time(seconds, expected):
    from gjsloss.common import format_elapsed_time

    assert format_elapsed_time(seconds) == expected


def test_derive_seed_deterministic():
    from gjsloss.common import derive_seed

    assert derive_seed(7, "noise") == derive_seed(
        7, "noise", 0
    ), "default index is not zero"
    assert derive_seed(7, "noise") == derive_seed(7, "noise"), "derivation not stable"

    seeds = {
        derive_seed(master, label, index)
        for master in (0, 1, 7)
        for label in ("noise", "split", "views", "shuffle")
        for index in range(4)
    }
    assert len(seeds) == 3 * 4 * 4, "derived seeds collided"
    assert all(0 <= seed < 2**63 for seed in seeds), "derived seed out of range"


def test_derive_seed_negative_master():
    from gjsloss.common import derive_seed

    assert derive_seed(-1, "noise") != derive_seed(
        1, "noise"
    ), "negative master seed folded onto its absolute value"


@pytest.mark.usefixtures("_chdir_tmp")
def test_mkdirp():
    from gjsloss.common import mkdirp

    mkdirp(os.path.join("runs", "a", "b"))
    assert os.path.isdir(os.path.join("runs", "a", "b")), "directory not created"
    mkdirp(os.path.join("runs", "a", "b"))

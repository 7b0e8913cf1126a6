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
import enum
import json
import math
from decimal import Decimal
from dataclasses import dataclass
from collections import UserString
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest


class MyString(UserString):
    pass


def test_is_string():
    from gjsloss.common import is_string

    assert is_string("a plain string"), "is_string is not accepting a python string"
    assert not is_string(b"a byte string"), "is_string is accepting a byte string"
    assert is_string(MyString("a userstring")), "is_string is not accepting a userstring"


def test_generic_dict():
    from gjsloss.common import GenericDict

    test_dict = GenericDict({"a": "b", "c": "d"}, overrides={"c": "e"})
    assert test_dict["a"] == "b", "Copying in constructor not working properly"
    assert test_dict["c"] == "e", "Overrides not working properly"

    assert test_dict.check("c") == ("c", "e"), ".check not finding existing key/value pair"
    assert test_dict.check("f") == (None, None), ".check found a missing key"

    test_dict.update({"a": "g"})
    assert test_dict["a"] == "g", ".update not updating values"


def test_immutable_generic_dict():
    from gjsloss.common import GenericImmutableDict

    test_dict = GenericImmutableDict({"a": "b", "p": 4}, overrides={"p": 5})
    assert test_dict["p"] == 5, "Overrides not working properly"

    with pytest.raises(TypeError, match="is immutable"):
        test_dict.update({"a": "g"})

    with pytest.raises(TypeError, match="is immutable"):
        test_dict["p"] = 9

    with pytest.raises(TypeError, match="is immutable"):
        del test_dict["a"]

    mutable = test_dict.copy_mut()
    mutable["p"] = 9
    assert mutable["p"] == 9, "copy_mut did not return a mutable copy"
    assert test_dict["p"] == 5, "copy_mut aliased the immutable original"


class Direction(str, enum.Enum):
    UP = "up"


class Level(enum.Enum):
    LOW = 4


@dataclass
class Point:
    label: MyString
    weight: Decimal


def test_generic_dict_encoder():
    from gjsloss.common import GenericDict

    value = GenericDict(
        {
            "a": [{"d": Decimal("0.25"), "e": Decimal("3"), "f": ("g", "h")}],
            "i": {"j": Direction.UP, "k": Level.LOW},
            "l": Point(label=MyString("m"), weight=Decimal("0.5")),
        }
    )
    assert json.loads(value.dumps()) == {
        "a": [{"d": 0.25, "e": 3, "f": ["g", "h"]}],
        "i": {"j": "up", "k": "LOW"},
        "l": {"label": "m", "weight": 0.5},
    }, "Failed to serialize deep dictionary"
    assert (
        GenericDict({"a": [1, 2]}).dumps(indent=0).replace("\n", "") == '{"a": [1,2]}'
    ), "Failed to properly handle indent kwarg"


def test_dumps_json_numpy():
    from gjsloss.common import dumps_json

    dumped = json.loads(
        dumps_json(
            {
                "array": np.array([[1.0, 2.5]]),
                "int": np.int64(7),
                "float": np.float32(0.5),
                "flag": np.bool_(True),
            }
        )
    )
    assert dumped == {
        "array": [[1.0, 2.5]],
        "int": 7,
        "float": 0.5,
        "flag": True,
    }, "numpy values were not converted to plain JSON"


def test_dumps_json_non_finite():
    from gjsloss.common import dumps_json

    text = dumps_json(
        {
            "inf": math.inf,
            "nested": [-math.inf, {"nan": math.nan}],
            "array": np.array([np.inf, 1.0]),
            "decimal": Decimal("Infinity"),
        }
    )
    assert "Infinity" not in text and "NaN" not in text, "output is not strict JSON"
    assert json.loads(text) == {
        "inf": "inf",
        "nested": ["-inf", {"nan": "nan"}],
        "array": ["inf", 1.0],
        "decimal": "inf",
    }, "non-finite floats were not written as strings"


def test_tpe():
    from gjsloss.common import get_tpe, set_tpe

    original = get_tpe()
    try:
        replacement = ThreadPoolExecutor(1)
        set_tpe(replacement)
        assert get_tpe() is replacement, "Failed to set TPE properly"
        assert get_tpe().submit(lambda: 4).result() == 4, "replacement TPE unusable"
    finally:
        set_tpe(original)


def test_process_limit(monkeypatch):
    from gjsloss.common import MAX_WORKERS_ENV
    from gjsloss.common.misc import _get_process_limit

    monkeypatch.setenv(MAX_WORKERS_ENV, "3")
    assert _get_process_limit() == 3, "worker limit ignored the environment"

    monkeypatch.setenv(MAX_WORKERS_ENV, "0")
    assert _get_process_limit() == 1, "worker limit was allowed below one"

    monkeypatch.delenv(MAX_WORKERS_ENV)
    assert _get_process_limit() == max(1, os.cpu_count() or 1)

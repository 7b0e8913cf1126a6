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
from enum import Enum
from decimal import Decimal
from typing import Dict, List, Literal, Optional, Tuple, Union

import pytest


class Shape(str, Enum):
    ROUND = "round"
    FLAT = "flat-top"


def test_is_optional():
    from gjsloss.config.variable import is_optional

    assert is_optional(int) is False, "is_optional false positive"
    assert is_optional(Optional[int]) is True, "is_optional false negative"
    assert (
        is_optional(Optional[Union[int, dict]]) is True
    ), "is_optional composite false negative"
    assert (
        is_optional(Union[None, int, dict]) is True
    ), "is_optional flattened union false negative"


def test_some_of():
    from gjsloss.config.variable import some_of

    assert some_of(int) == int, "some_of changed the type of a non-option type"
    assert some_of(List[str]) == List[str], "some_of changed a non-option type"
    assert some_of(Optional[int]) == int, "some_of failed to extract type from option type"
    assert (
        some_of(Union[Dict, List, None]) == Union[Dict, List]
    ), "some_of failed to properly handle flattened optional union"


def test_repr_type():
    from gjsloss.config.variable import repr_type

    assert repr_type(Optional[int]) == "int?"
    assert repr_type(Shape) == "round｜flat-top"
    assert repr_type(Literal["a", 1]) == "'a'｜1"


def test_variable_properties():
    from gjsloss.config import Variable

    optional = Variable("EXAMPLE", Optional[int], "x")
    assert optional.optional, ".optional property incorrectly set"
    assert not optional.required, "optional variable reported as required"

    defaulted = Variable("EXAMPLE", int, "x", default=3)
    assert not defaulted.required, "variable with default reported as required"
    assert Variable("EXAMPLE", int, "x").required, "required variable not reported"
    assert hash(optional) != hash(defaulted), "hash ignores the type"


def _compile(variable, raw, **kwargs):
    from gjsloss.common import GenericDict

    return variable.compile(GenericDict(raw), **kwargs)


def test_compile_scalars():
    from gjsloss.config import Variable

    assert _compile(Variable("A", int, "x"), {"A": 4}) == ("A", 4)
    assert _compile(Variable("A", int, "x"), {"A": Decimal("4.0")}) == ("A", 4)
    assert _compile(Variable("A", Decimal, "x"), {"A": Decimal("0.4")}) == (
        "A",
        Decimal("0.4"),
    )
    assert _compile(Variable("A", str, "x"), {"A": "runs"}) == ("A", "runs")
    assert _compile(Variable("A", bool, "x"), {"A": True}) == ("A", True)
    assert _compile(Variable("A", Literal["a", "b"], "x"), {"A": "b"}) == ("A", "b")


def test_compile_enum():
    from gjsloss.config import Variable

    variable = Variable("SHAPE", Shape, "x")
    assert _compile(variable, {"SHAPE": "flat-top"})[1] == Shape.FLAT, "value lookup"
    assert _compile(variable, {"SHAPE": "ROUND"})[1] == Shape.ROUND, "name lookup"
    with pytest.raises(ValueError, match="expected one of round｜flat-top"):
        _compile(variable, {"SHAPE": "square"})


def test_compile_products():
    from gjsloss.config import Variable

    drops = Variable("DROPS", Optional[List[Tuple[int, Decimal]]], "x")
    assert _compile(drops, {"DROPS": [[10, Decimal("0.1")], [20, 1]]})[1] == [
        (10, Decimal("0.1")),
        (20, Decimal("1")),
    ], "list of tuples compiled incorrectly"
    assert _compile(drops, {})[1] is None, "unset optional did not compile to None"

    pairs = Variable("PAIRS", Dict[int, int], "x")
    assert _compile(pairs, {"PAIRS": {0: 1, 2: 3}})[1] == {0: 1, 2: 3}

    groups = Variable("GROUPS", List[List[int]], "x")
    assert _compile(groups, {"GROUPS": [[0, 1], [2, 3, 4]]})[1] == [[0, 1], [2, 3, 4]]

    either = Variable("EITHER", Union[int, str], "x")
    assert _compile(either, {"EITHER": "auto"})[1] == "auto", "union fell through"


def test_compile_default():
    from gjsloss.config import Variable

    variable = Variable("EPOCHS", int, "x", default=100)
    assert _compile(variable, {}) == (None, 100), "default not applied"
    assert _compile(variable, {"EPOCHS": 3}) == ("EPOCHS", 3), "value ignored"


def test_compile_required():
    from gjsloss.config import Variable, MissingRequiredVariable

    variable = Variable("LOSS_KIND", int, "x")
    with pytest.raises(
        MissingRequiredVariable,
        match=r"Required variable 'LOSS_KIND' did not get a specified value",
    ):
        _compile(variable, {})


@pytest.mark.parametrize(
    ("type", "value", "match"),
    [
        (int, "4", "Refusing to automatically convert"),
        (int, True, "Refusing to automatically convert"),
        (int, Decimal("0.5"), "is not integral"),
        (Decimal, "0.5", "Refusing to automatically convert"),
        (bool, "No", "Refusing to automatically convert"),
        (str, 5, "Refusing to automatically convert"),
        (List[int], {}, "is not a list"),
        (Tuple[int, int], [1], r"\(1/2\) tuple entries provided"),
        (Dict[int, int], [1], "is not a mapping"),
        (Literal["a"], "b", "is invalid"),
        (Union[int, bool], "x", "is invalid for union"),
        (int, None, "explicitly assigned a null value"),
        (List[int], [1, None], r"'VAR\[1\]' explicitly assigned a null value"),
    ],
)
def test_compile_invalid(type, value, match):
    from gjsloss.config import Variable

    with pytest.raises(ValueError, match=match):
        _compile(Variable("VAR", type, "x"), {"VAR": value})


def test_compile_unsupported_type():
    from gjsloss.config import Variable

    with pytest.raises(TypeError, match="unsupported type"):
        _compile(Variable("VAR", float, "x"), {"VAR": 0.5})


@pytest.mark.usefixtures("_mock_fs")
def test_compile_paths(_mock_fs):
    from gjsloss.common import Path
    from gjsloss.config import Variable

    _mock_fs.create_file("/cwd/data/batch_1.bin")
    variable = Variable("PATHS", List[Path], "x")

    _, paths = _compile(variable, {"PATHS": ["batch_1.bin"]}, base_dir="/cwd/data")
    assert paths == ["/cwd/data/batch_1.bin"], "relative path not resolved"

    _, paths = _compile(variable, {"PATHS": ["/cwd/data/./batch_1.bin"]})
    assert paths == ["/cwd/data/batch_1.bin"], "absolute path not normalized"

    with pytest.raises(ValueError, match="does not exist"):
        _compile(variable, {"PATHS": ["batch_2.bin"]}, base_dir="/cwd/data")


def test_compile_all():
    from gjsloss.config import Variable, compile_all

    variables = [
        Variable("A", int, "x"),
        Variable("B", Optional[int], "x"),
        Variable("C", int, "x", default=1),
    ]
    final, warnings, errors = compile_all(variables, {"A": 2, "_comment": "hi"})
    assert dict(final) == {"A": 2, "B": None, "C": 1}
    assert warnings == ["Key '_comment' is ignored."]
    assert errors == []

    _, _, errors = compile_all(variables, {"B": "x", "D": 4})
    assert len(errors) == 3, f"expected three errors, got {errors}"
    assert "Required variable 'A'" in errors[0]
    assert "Refusing to automatically convert" in errors[1]
    assert errors[2] == "Unknown key 'D' provided."

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
import inspect
from enum import Enum
from decimal import Decimal, InvalidOperation
from dataclasses import dataclass
from typing import (
    Any,
    List,
    Literal,
    Mapping,
    Optional,
    Tuple,
    Type,
    Union,
    get_args,
    get_origin,
)

from ..common import GenericDict, Path, is_string


class MissingRequiredVariable(ValueError):
    def __init__(self, variable: "Variable") -> None:
        self.variable = variable
        super().__init__(
            f"Required variable '{self.variable.name}' did not get a specified value."
        )


def is_optional(t: Type[Any]) -> bool:
    type_args = get_args(t)
    return get_origin(t) is Union and type(None) in type_args


def some_of(t: Type[Any]) -> Type[Any]:
    if not is_optional(t):
        return t

    args_without_none = [arg for arg in get_args(t) if arg is not type(None)]
    if len(args_without_none) == 1:
        return args_without_none[0]

    return Union[tuple(args_without_none)]  # type: ignore


def repr_type(t: Type[Any]) -> str:
    optional = is_optional(t)
    some = some_of(t)

    type_string = getattr(some, "__name__", str(some))

    if inspect.isclass(some) and issubclass(some, Enum):
        type_string = "｜".join(str(e.value) for e in some)
    else:
        origin, args = get_origin(some), get_args(some)
        if origin is Union:
            type_string = "(" + "｜".join(repr_type(arg) for arg in args) + ")"
        elif origin is Literal:
            return "｜".join(repr(arg) for arg in args)
        elif origin is not None:
            type_string = f"{type_string}[{', '.join(repr_type(a) for a in args)}]"

    return type_string + ("?" if optional else "")


@dataclass
class Variable:
    """
    Metadata on a gjsloss configuration variable, used to name, document and
    validate values supplied in experiment configuration files.

    :param name: The variable's key in configuration files, ``UPPER_SNAKE_CASE``.
    :param type: A Python type object describing acceptable values.

        Supported scalars: ``int``, ``decimal.Decimal``, ``bool``, ``str``,
        :class:`gjsloss.common.Path` and ``Enum`` subclasses (matched by value,
        then by name).

        Supported products: ``Union`` (incl. ``Optional``), ``List``,
        ``Tuple``, ``Dict`` and ``Literal``.
    :param description: A human-readable description of the variable.
    :param default: A default value. Optional variables default to ``None``;
        a non-optional variable without a default is required.
    :param units: Used only in documentation, e.g. ``epochs``.
    """

    name: str
    type: Any
    description: str
    default: Any = None
    units: Optional[str] = None

    @property
    def optional(self) -> bool:
        return is_optional(self.type)

    @property
    def required(self) -> bool:
        return self.default is None and not self.optional

    def __process(
        self,
        key_path: str,
        value: Any,
        validating_type: Type[Any],
        default: Any = None,
        explicitly_specified: bool = True,
        base_dir: Optional[str] = None,
        depth: int = 0,
    ):
        if value is None:
            if explicitly_specified:
                if not is_optional(validating_type):
                    raise ValueError(
                        f"Non-optional variable '{key_path}' explicitly assigned a null value."
                    )
                return None
            if default is not None:
                return self.__process(
                    key_path=key_path,
                    value=default,
                    validating_type=validating_type,
                    base_dir=base_dir,
                    depth=depth + 1,
                )
            if not is_optional(validating_type):
                if depth == 0:
                    raise MissingRequiredVariable(self)
                raise ValueError(f"'{key_path}' must be non-null.")
            return None

        if is_optional(validating_type):
            validating_type = some_of(validating_type)

        type_origin = get_origin(validating_type)
        type_args = get_args(validating_type)

        if type_origin in [list, tuple]:
            if not isinstance(value, (list, tuple)):
                raise ValueError(
                    f"Value provided for variable '{key_path}' of type {repr_type(validating_type)} is not a list: '{value}'"
                )
            if type_origin == tuple and len(value) != len(type_args):
                raise ValueError(
                    f"Value provided for variable '{key_path}' of type {repr_type(validating_type)} is invalid: ({len(value)}/{len(type_args)}) tuple entries provided"
                )
            processed_list = []
            for i, item in enumerate(value):
                item_type = type_args[i] if type_origin == tuple else type_args[0]
                processed_list.append(
                    self.__process(
                        key_path=f"{key_path}[{i}]",
                        value=item,
                        validating_type=item_type,
                        base_dir=base_dir,
                        depth=depth + 1,
                    )
                )
            if type_origin == tuple:
                return tuple(processed_list)
            return processed_list
        elif type_origin == dict:
            key_type, value_type = type_args
            if not isinstance(value, dict):
                raise ValueError(
                    f"Value provided for variable '{key_path}' of type {repr_type(validating_type)} is not a mapping: '{value}'"
                )
            processed = {}
            for key, val in value.items():
                key_validated = self.__process(
                    key_path=key_path,
                    value=key,
                    validating_type=key_type,
                    base_dir=base_dir,
                    depth=depth + 1,
                )
                processed[key_validated] = self.__process(
                    key_path=f"{key_path}.{key_validated}",
                    value=val,
                    validating_type=value_type,
                    base_dir=base_dir,
                    depth=depth + 1,
                )
            return processed
        elif type_origin == Union:
            errors = []
            for arg in type_args:
                try:
                    final_value = self.__process(
                        key_path=key_path,
                        value=value,
                        validating_type=arg,
                        base_dir=base_dir,
                        depth=depth + 1,
                    )
                    if final_value is not None:
                        return final_value
                except ValueError as e:
                    errors.append(f"\t{str(e)}")
            raise ValueError(
                "\n".join(
                    [
                        f"Value for '{key_path}' is invalid for union {repr_type(validating_type)}:"
                    ]
                    + errors
                )
            )
        elif type_origin == Literal:
            if value in type_args:
                return value
            raise ValueError(
                f"Value for '{key_path}' is invalid for {repr_type(validating_type)}: '{value}'"
            )
        elif validating_type == Path:
            raw = str(value)
            if base_dir is not None and not os.path.isabs(raw):
                raw = os.path.join(base_dir, raw)
            result = Path(os.path.normpath(raw))
            result.validate(f"Path provided for variable '{key_path}' is invalid")
            return result
        elif validating_type == bool:
            if not isinstance(value, bool):
                raise ValueError(
                    f"Refusing to automatically convert '{value}' at '{key_path}' to a Boolean"
                )
            return value
        elif inspect.isclass(validating_type) and issubclass(validating_type, Enum):
            if isinstance(value, validating_type):
                return value
            try:
                return validating_type(value)
            except ValueError:
                pass
            try:
                return validating_type[value]
            except KeyError:
                raise ValueError(
                    f"Value provided for variable '{key_path}' of enumerated type {validating_type.__name__} is invalid: '{value}' (expected one of {repr_type(validating_type)})"
                )
        elif issubclass(validating_type, str):
            if not is_string(value):
                raise ValueError(
                    f"Refusing to automatically convert value at '{key_path}' to a string"
                )
            return str(value)
        elif issubclass(validating_type, (Decimal, int)):
            if isinstance(value, bool) or not isinstance(value, (int, float, Decimal)):
                raise ValueError(
                    f"Refusing to automatically convert value at '{key_path}' to a {validating_type.__name__}: '{value}'"
                )
            if validating_type == int and Decimal(value) != int(value):
                raise ValueError(
                    f"Value provided for variable '{key_path}' of type int is not integral: '{value}'"
                )
            try:
                return validating_type(value)
            except (InvalidOperation, TypeError):
                raise ValueError(
                    f"Value provided for variable '{key_path}' of type {validating_type.__name__} is invalid: '{value}'"
                )
        raise TypeError(
            f"Variable '{self.name}' has an unsupported type {repr_type(validating_type)}"
        )

    def compile(
        self,
        mutable_config: GenericDict[str, Any],
        base_dir: Optional[str] = None,
    ) -> Tuple[Optional[str], Any]:
        """
        Validates this variable's value in ``mutable_config``, falling back to
        the default.

        :param mutable_config: The raw, user-supplied values.
        :param base_dir: Relative paths are resolved against this directory.
        :returns: A tuple of the key if it was explicitly specified (else
            ``None``) and the processed value.
        """
        exists, value = mutable_config.check(self.name)

        processed = self.__process(
            key_path=self.name,
            value=value,
            default=self.default,
            validating_type=self.type,
            explicitly_specified=exists is not None,
            base_dir=base_dir,
        )

        return (exists, processed)

    def __hash__(self) -> int:
        return hash((self.name, repr_type(self.type)))


def compile_all(
    variables: List[Variable],
    raw: Mapping[str, Any],
    base_dir: Optional[str] = None,
) -> Tuple[GenericDict[str, Any], List[str], List[str]]:
    """
    Validates a raw configuration against a list of variables.

    :returns: A tuple of the processed values, warnings, and errors. Keys in
        ``raw`` that match no variable are reported as errors.
    """
    mutable = GenericDict(raw)
    final: GenericDict[str, Any] = GenericDict()
    warnings: List[str] = []
    errors: List[str] = []

    for variable in variables:
        try:
            exists, processed = variable.compile(mutable, base_dir=base_dir)
        except ValueError as e:
            errors.append(str(e))
            continue
        final[variable.name] = processed
        if exists is not None:
            del mutable[exists]

    for key in mutable:
        if key.startswith("meta") or key.startswith("_"):
            warnings.append(f"Key '{key}' is ignored.")
            continue
        errors.append(f"Unknown key '{key}' provided.")

    return final, warnings, errors

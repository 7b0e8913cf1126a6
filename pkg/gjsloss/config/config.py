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
import dataclasses
from decimal import Decimal
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Union

import yaml
from yamlcore import CCoreLoader

from .variable import Variable, compile_all
from ..common import GenericImmutableDict, AnyPath, is_string
from ..logging import warn
from ..__version__ import __version__


class _GjslossYAMLLoader(CCoreLoader):
    def construct_yaml_float(self, node: yaml.ScalarNode) -> Decimal:  # type: ignore
        value = str(self.construct_scalar(node))
        value = value.replace("_", "").lower()
        sign = +1
        if value[0] == "-":
            sign = -1
        if value[0] in "+-":
            value = value[1:]
        if value == ".inf":
            return sign * Decimal("Infinity")
        elif value == ".nan":
            return Decimal("nan")
        return sign * Decimal(value)

    def __init__(self, stream) -> None:
        super().__init__(stream)
        self.add_constructor(
            "tag:yaml.org,2002:float",
            constructor=_GjslossYAMLLoader.construct_yaml_float,
        )


class UnknownExtensionError(ValueError):
    """
    When a passed configuration file is neither .json nor .yml/.yaml.
    """

    def __init__(self, config: AnyPath) -> None:
        self.config = str(config)
        _, ext = os.path.splitext(config)
        super().__init__(
            f"Unsupported configuration file extension '{ext}' for '{config}'."
        )


class PassedDirectoryError(ValueError):
    def __init__(self, config: AnyPath) -> None:
        self.config = str(config)
        super().__init__(
            f"'{config}' is a directory: please pass the configuration file directly."
        )


def _validate_config_file(config: AnyPath) -> Literal["json", "yaml"]:
    config = str(config)
    if config.endswith(".json"):
        return "json"
    elif config.endswith(".yml") or config.endswith(".yaml"):
        return "yaml"
    elif os.path.isdir(config):
        raise PassedDirectoryError(config)
    raise UnknownExtensionError(config)


class InvalidConfig(ValueError):
    """
    An error raised when a configuration under resolution is invalid.

    :param config: A human-readable name for the configuration, usually the
        file's relative path.
    :param warnings: Warnings generated while loading the configuration.
    :param errors: Errors generated while loading the configuration.
    :param message: An optional override for the Exception message.
    """

    def __init__(
        self,
        config: str,
        warnings: List[str],
        errors: List[str],
        message: Optional[str] = None,
        *args,
        **kwargs,
    ) -> None:
        self.config = config
        self.warnings = warnings
        self.errors = errors
        if message is None:
            message = f"The following errors were encountered in {config}: \n"
            for error in self.errors:
                message += f"\t* {error}\n"
            message = message.strip()
        super().__init__(message, *args, **kwargs)


@dataclass
class Meta:
    """
    Constitutes metadata for a configuration object.
    """

    version: int = 1
    gjsloss_version: Optional[str] = __version__
    source: Optional[str] = None

    @classmethod
    def from_dict(Self, meta_dict: dict) -> "Meta":
        return Self(**meta_dict)

    def copy(self) -> "Meta":
        return dataclasses.replace(self)


def _read_mapping(path: str) -> Any:
    identifier = os.path.relpath(path)
    validated_type = _validate_config_file(path)
    try:
        with open(path, encoding="utf8") as f:
            if validated_type == "json":
                return json.load(f, parse_float=Decimal)
            return yaml.load(f, Loader=_GjslossYAMLLoader)
    except FileNotFoundError:
        raise InvalidConfig(identifier, [], [f"File '{path}' does not exist."])
    except json.JSONDecodeError as e:
        raise InvalidConfig(
            identifier, [], [f"{identifier}:{e.lineno}:{e.colno}: {e.msg}"]
        )
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        location = identifier
        if mark is not None:
            location = f"{identifier}:{mark.line + 1}:{mark.column + 1}"
        raise InvalidConfig(identifier, [], [f"{location}: {problem}"])


class Config(GenericImmutableDict[str, Any]):
    """
    An immutable map from gjsloss configuration variable keys to their
    validated values.

    Use :meth:`load` to create validated configurations from files or
    dictionaries.

    :param meta: The :class:`Meta` object for this configuration.
    """

    meta: Meta

    def __init__(
        self,
        *args,
        meta: Optional[Meta] = None,
        **kwargs,
    ):
        if meta is None:
            meta = Meta()
        self.meta = meta
        super().__init__(*args, **kwargs)

    def to_raw_dict(self, include_meta: bool = True) -> Dict[str, Any]:
        final = super().to_raw_dict()
        if include_meta:
            final["meta"] = self.meta
        return final

    def dumps(self, include_meta: bool = True, **kwargs) -> str:
        kwargs.setdefault("indent", 4)
        return json.dumps(
            self.to_raw_dict(include_meta), cls=self.get_encoder(), **kwargs
        )

    @classmethod
    def load(
        Self,
        config_in: Union[AnyPath, Mapping[str, Any]],
        config_vars: Sequence[Variable],
        base_dir: Optional[str] = None,
    ) -> "Config":
        """
        Loads and validates a configuration.

        :param config_in: Either a path to a ``.json``/``.yml``/``.yaml`` file
            or a mapping of raw values.
        :param config_vars: The variables to validate against.
        :param base_dir: Directory relative paths are resolved against.
            Defaults to the configuration file's directory, or the current
            working directory for mappings.
        :returns: The validated configuration.
        :raises InvalidConfig: On parse errors, invalid values, missing
            required variables or unknown keys.
        """
        identifier = "configuration dict"
        source: Optional[str] = None
        if isinstance(config_in, Mapping):
            mapping: Any = config_in
        else:
            source = os.path.abspath(str(config_in))
            identifier = os.path.relpath(source)
            mapping = _read_mapping(source)
            base_dir = base_dir or os.path.dirname(source)

        if mapping is None:
            mapping = {}
        if not isinstance(mapping, Mapping):
            raise InvalidConfig(
                identifier,
                [],
                [f"Top-level object must be a mapping, got {type(mapping).__name__}."],
            )

        raw = dict(mapping)
        meta = Meta(source=source)
        meta_raw = raw.pop("meta", None)
        if meta_raw is not None:
            try:
                meta = Meta.from_dict({**meta_raw, "source": source})
            except TypeError as e:
                raise InvalidConfig(identifier, [], [f"'meta' object is invalid: {e}"])

        for key in raw:
            if not is_string(key):
                raise InvalidConfig(identifier, [], [f"Key '{key}' is not a string."])

        final, warnings, errors = compile_all(
            list(config_vars), raw, base_dir=base_dir or os.getcwd()
        )
        if len(errors) != 0:
            raise InvalidConfig(identifier, warnings, errors)

        for warning in warnings:
            warn(f"{identifier}: {warning}")

        return Self(final, meta=meta)

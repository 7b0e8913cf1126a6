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
import math
import dataclasses
from enum import Enum
from decimal import Decimal
from collections import UserString
from typing import (
    Any,
    Dict,
    Hashable,
    ItemsView,
    Iterator,
    Mapping,
    Optional,
    Tuple,
    Type,
    TypeVar,
)

import numpy as np


class GenericDictEncoder(json.JSONEncoder):
    """
    A JSON encoder for :class:`GenericDict` objects, dataclasses and the numeric
    types produced throughout gjsloss (``Decimal``, numpy scalars and arrays).

    Non-finite floats are written as strings (``"inf"``, ``"-inf"``, ``"nan"``)
    so the output stays strict JSON.
    """

    def default(self, o):
        if isinstance(o, GenericDict):
            return _sanitize_floats(o.to_raw_dict())
        elif isinstance(o, os.PathLike) or isinstance(o, UserString):
            return str(o)
        elif not isinstance(o, type) and dataclasses.is_dataclass(o):
            return _sanitize_floats(dataclasses.asdict(o))
        elif isinstance(o, Enum):
            return o.value if isinstance(o.value, str) else o.name
        elif isinstance(o, Decimal):
            if o.is_infinite() or o.as_integer_ratio()[1] != 1:
                return _finite_or_str(float(o))
            return int(o)
        elif isinstance(o, np.ndarray):
            return _sanitize_floats(o.tolist())
        elif isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return _finite_or_str(float(o))
        elif isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)

    def iterencode(self, o, _one_shot=False):
        return super().iterencode(_sanitize_floats(o), _one_shot)


def _finite_or_str(value: float):
    if math.isfinite(value):
        return value
    return str(value)


def _sanitize_floats(o):
    if isinstance(o, float):
        return _finite_or_str(o)
    elif isinstance(o, dict):
        return {k: _sanitize_floats(v) for k, v in o.items()}
    elif isinstance(o, (list, tuple)):
        return [_sanitize_floats(v) for v in o]
    return o


def dumps_json(o: Any, **kwargs) -> str:
    """
    Serializes ``o`` with :class:`GenericDictEncoder`, indented by default.
    """
    kwargs.setdefault("indent", 4)
    return json.dumps(o, cls=GenericDictEncoder, **kwargs)


KT = TypeVar("KT", bound=Hashable)
VT = TypeVar("VT")


class GenericDict(Mapping[KT, VT]):
    """
    An ordered mapping with optional overrides applied on construction.

    :param copying: A base Mapping object to copy values from.
    :param overrides: Another mapping object to override the values from
        ``copying`` with.
    """

    def __init__(
        self,
        copying: Optional[Mapping[KT, VT]] = None,
        /,
        overrides: Optional[Mapping[KT, VT]] = None,
    ) -> None:
        super().__init__()
        self.__data: Dict[KT, VT] = {}
        for key, value in (copying or {}).items():
            self.__data[key] = value
        for key, value in (overrides or {}).items():
            self.__data[key] = value

    def __getitem__(self, key: KT) -> VT:
        return self.__data[key]

    def __setitem__(self, key: KT, item: VT):
        self.__data[key] = item

    def __delitem__(self, key: KT):
        del self.__data[key]

    def __len__(self) -> int:
        return len(self.__data)

    def __repr__(self) -> str:
        return self.to_raw_dict().__repr__()

    def __iter__(self) -> Iterator[KT]:
        return iter(self.__data)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GenericDict):
            return self.to_raw_dict() == other.to_raw_dict()
        if isinstance(other, dict):
            return self.to_raw_dict() == other
        return NotImplemented

    T = TypeVar("T", bound="GenericDict")

    def copy(self: T) -> T:
        return self.__class__(self)

    def to_raw_dict(self) -> dict:
        """
        :returns: A copy of the underlying built-in ``dict``.
        """
        return self.__data.copy()

    def get_encoder(self) -> Type[GenericDictEncoder]:
        return GenericDictEncoder

    def items(self) -> ItemsView[KT, VT]:
        return self.__data.items()

    def dumps(self, **kwargs) -> str:
        """
        :param kwargs: Passed to ``json.dumps``.
        :returns: A JSON string representing the GenericDict object.
        """
        kwargs.setdefault("indent", 4)
        return json.dumps(self.to_raw_dict(), cls=self.get_encoder(), **kwargs)

    def check(self, key: KT, /) -> Tuple[Optional[KT], Optional[VT]]:
        """
        :returns: ``(key, value)`` if the key exists, else ``(None, None)``.
            ``None`` is a valid value for some keys, so check the first
            element for existence.
        """
        return (key if key in self.__data else None, self.get(key))

    def update(self, incoming: "Mapping[KT, VT]"):
        for key, value in incoming.items():
            self[key] = value


class GenericImmutableDict(GenericDict[KT, VT]):
    __lock: bool

    def __init__(
        self,
        copying: Optional[Mapping[KT, VT]] = None,
        /,
        *args,
        **kwargs,
    ) -> None:
        super().__init__(copying, *args, **kwargs)
        self.__lock = True

    def __setitem__(self, key: KT, item: VT):
        if self.__lock:
            raise TypeError(f"{self.__class__.__name__} is immutable")
        return super().__setitem__(key, item)

    def __delitem__(self, key: KT):
        if self.__lock:
            raise TypeError(f"{self.__class__.__name__} is immutable")
        return super().__delitem__(key)

    def __setattr__(self, attr: str, value: Any):
        try:
            if self.__lock:
                raise TypeError(f"{self.__class__.__name__} is immutable")
        except AttributeError:
            pass
        return super().__setattr__(attr, value)

    def copy_mut(self) -> GenericDict[KT, VT]:
        return GenericDict(self)

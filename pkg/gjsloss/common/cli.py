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
from typing import Optional, Type, Union

from cloup import (
    HelpFormatter,
    HelpTheme,
    Style,
)
from click import (
    Choice,
    Context,
    Parameter,
)

formatter_settings = HelpFormatter.settings(
    theme=HelpTheme(
        invoked_command=Style(fg="bright_yellow"),
        heading=Style(fg="cyan", bold=True),
        constraint=Style(fg="magenta"),
        col1=Style(fg="bright_yellow"),
    )
)


class EnumValueChoice(Choice):
    """
    A choice over the string values of a string-valued ``Enum``, converted to
    the member itself.
    """

    def __init__(self, enum: Type[Enum]) -> None:
        super().__init__([str(e.value) for e in enum], case_sensitive=True)
        self.__enum = enum

    def convert(
        self,
        value: Union[str, Enum],
        param: Optional[Parameter],
        ctx: Optional[Context],
    ) -> Enum:
        if isinstance(value, self.__enum):
            return value
        return self.__enum(super().convert(value, param, ctx))

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
"""
Common Utilities Module
-----------------------

A number of common utility functions and classes used throughout gjsloss.
"""
from .types import is_string, is_number, is_real_number, Number, Path, AnyPath
from .misc import (
    slugify,
    mkdirp,
    format_elapsed_time,
    derive_seed,
    get_gjsloss_root,
    MAX_WORKERS_ENV,
)
from .generic_dict import (
    GenericDictEncoder,
    GenericDict,
    GenericImmutableDict,
    dumps_json,
)
from .tpe import get_tpe, set_tpe

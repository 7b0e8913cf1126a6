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
from concurrent.futures import ThreadPoolExecutor

from .misc import _get_process_limit

TPE = ThreadPoolExecutor(max_workers=_get_process_limit())


def set_tpe(tpe: ThreadPoolExecutor):
    """
    Replaces gjsloss's global ``ThreadPoolExecutor``, which bound searches and
    sharded training steps fan their chunks out to.

    :param tpe: The replacement ThreadPoolExecutor
    """
    global TPE
    TPE = tpe


def get_tpe() -> ThreadPoolExecutor:
    """
    :returns: gjsloss's global ``ThreadPoolExecutor``. Chunks submitted to it
        must not themselves block on it.
    """
    return TPE

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
class ResourceCapExceeded(ValueError):
    """
    Raised when an exhaustive search would exceed its evaluation cap. Searches
    never fall back to sampling silently.
    """

    def __init__(self, what: str, count: int, cap: int) -> None:
        self.count = count
        self.cap = cap
        super().__init__(f"{what} requires {count} evaluations, exceeding the cap of {cap}.")


class UnboundedLossError(ValueError):
    """
    Raised when a bound is requested for a loss whose class sum has no finite
    upper bound over the simplex.
    """


class InvalidBoundRequest(ValueError):
    pass


class InvalidRiskInstance(ValueError):
    pass

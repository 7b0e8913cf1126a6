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
import math
import time
import traceback
from enum import Enum
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar, Dict, List, Optional, Tuple, Type

from ..logging import debug, err


class Suite(str, Enum):
    BOUNDS = "bounds"
    DECOMPOSITION = "decomposition"
    GRADIENTS = "gradients"
    LIMITS = "limits"
    RISK_THEOREM = "risk-theorem"
    ASYM_CONDITIONS = "asym-conditions"

    def __str__(self) -> str:
        return self.value


@dataclass
class ClaimResult:
    """
    :param observed: The worst case the claim measured. The claim passes iff
        ``observed ≤ tolerance``.
    :param details: Claim-specific supporting numbers.
    :param error: Set when measuring raised instead of returning.
    """

    id: str
    suite: Suite
    description: str
    tolerance: float
    observed: float
    passed: bool
    seconds: float
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "suite": self.suite.value,
            "description": self.description,
            "tolerance": self.tolerance,
            "worst_violation": self.observed if math.isfinite(self.observed) else None,
            "passed": self.passed,
            "seconds": self.seconds,
            "details": self.details,
            "error": self.error,
        }


class Claim(ABC):
    """
    A numerically checkable statement.

    Subclasses set the class variables and implement :meth:`measure`, which
    returns the worst case found (a violation, an error or a count, depending
    on the claim) along with supporting details.

    :param seed: The master seed every random draw derives from.
    :param quick: Shrinks sample counts for smoke runs.
    """

    id: ClassVar[str] = NotImplemented
    suite: ClassVar[Suite]
    description: ClassVar[str] = ""
    tolerance: ClassVar[float] = 0.0

    def __init__(self, seed: int = 0, quick: bool = False) -> None:
        self.seed = seed
        self.quick = quick

    def budget(self, full: int, quick: int) -> int:
        return quick if self.quick else full

    @abstractmethod
    def measure(self) -> Tuple[float, Dict[str, Any]]:
        pass

    def run(self) -> ClaimResult:
        debug(f"Checking {self.id}…")
        started = time.perf_counter()
        error = None
        try:
            observed, details = self.measure()
            observed = float(observed)
        except Exception as e:
            err(f"Claim '{self.id}' raised {type(e).__name__}: {e}")
            debug(traceback.format_exc())
            observed, details, error = math.inf, {}, f"{type(e).__name__}: {e}"
        return ClaimResult(
            id=self.id,
            suite=self.suite,
            description=self.description,
            tolerance=self.tolerance,
            observed=observed,
            passed=error is None and observed <= self.tolerance,
            seconds=time.perf_counter() - started,
            details=details,
            error=error,
        )

    class ClaimFactory(object):
        """
        A registry of :class:`Claim` types by id, in registration order.
        """

        __registry: ClassVar[Dict[str, Type["Claim"]]] = {}

        @classmethod
        def register(Self) -> Callable[[Type["Claim"]], Type["Claim"]]:
            def decorator(cls: Type["Claim"]) -> Type["Claim"]:
                if cls.id == NotImplemented:
                    raise RuntimeError(
                        f"Abstract claim {cls} without property .id cannot be registered."
                    )
                Self.__registry[cls.id.lower()] = cls
                return cls

            return decorator

        @classmethod
        def get(Self, name: str) -> Optional[Type["Claim"]]:
            return Self.__registry.get(name.lower())

        @classmethod
        def list(Self) -> List[str]:
            return [cls.id for cls in Self.__registry.values()]

        @classmethod
        def for_suite(Self, suite: Suite) -> List[Type["Claim"]]:
            return [cls for cls in Self.__registry.values() if cls.suite == suite]

    factory = ClaimFactory

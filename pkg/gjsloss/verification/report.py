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
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List

from rich.table import Table

from .claim import Claim, ClaimResult, Suite
from ..__version__ import __version__
from ..common import dumps_json
from ..logging import console, info, success, err, verbose


class UnknownSuite(ValueError):
    def __init__(self, selector: str) -> None:
        self.selector = selector
        choices = ", ".join(["all"] + [suite.value for suite in Suite])
        super().__init__(f"Unknown suite or claim '{selector}'. Choose from: {choices}")


@dataclass
class VerificationReport:
    results: List[ClaimResult]
    seed: int
    quick: bool
    selectors: List[str] = field(default_factory=list)
    seconds: float = 0.0
    gjsloss_version: str = __version__

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[ClaimResult]:
        return [result for result in self.results if not result.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gjsloss_version": self.gjsloss_version,
            "seed": self.seed,
            "quick": self.quick,
            "selectors": self.selectors,
            "seconds": self.seconds,
            "passed": self.passed,
            "claims": [result.to_dict() for result in self.results],
        }

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    def summary_table(self) -> Table:
        table = Table(title="Verification", show_lines=False)
        table.add_column("Claim", no_wrap=True)
        table.add_column("Observed", justify="right")
        table.add_column("Tolerance", justify="right")
        table.add_column("Time", justify="right")
        table.add_column("Result", justify="center")
        for result in self.results:
            status = "[green]pass" if result.passed else "[red]FAIL"
            table.add_row(
                result.id,
                f"{result.observed:.3e}",
                f"{result.tolerance:.1e}",
                f"{result.seconds:.2f}s",
                status,
            )
        return table


def resolve_selectors(selectors: Iterable[str]) -> List[type]:
    """
    Expands suite names, claim ids and ``all`` into claim types, keeping
    registration order and dropping duplicates.

    :raises UnknownSuite: For a selector that names neither.
    """
    chosen: List[type] = []
    for selector in selectors:
        if selector == "all":
            candidates = [Claim.factory.get(id) for id in Claim.factory.list()]
        else:
            try:
                candidates = Claim.factory.for_suite(Suite(selector))
            except ValueError:
                claim = Claim.factory.get(selector)
                if claim is None:
                    raise UnknownSuite(selector) from None
                candidates = [claim]
        for candidate in candidates:
            if candidate not in chosen:
                chosen.append(candidate)
    return chosen


def run_suites(
    selectors: Iterable[str] = ("all",),
    seed: int = 0,
    quick: bool = False,
    show_table: bool = True,
) -> VerificationReport:
    """
    Runs every claim the selectors name. A claim that raises is recorded as
    failed and the remaining claims still run.
    """
    selectors = list(selectors) or ["all"]
    claims = resolve_selectors(selectors)
    info(f"Running {len(claims)} claim(s) with seed {seed}{' (quick)' if quick else ''}…")
    started = time.perf_counter()
    results = []
    for cls in claims:
        result = cls(seed=seed, quick=quick).run()
        verbose(
            f"{result.id}: observed {result.observed:.3e}, tolerance {result.tolerance:.1e}"
        )
        results.append(result)
    report = VerificationReport(
        results=results,
        seed=seed,
        quick=quick,
        selectors=selectors,
        seconds=time.perf_counter() - started,
    )
    if show_table:
        console.print(report.summary_table())
    if report.passed:
        success(f"All {len(results)} claim(s) hold.")
    else:
        err(
            f"{len(report.failures)} of {len(results)} claim(s) failed: "
            + ", ".join(result.id for result in report.failures)
        )
    return report


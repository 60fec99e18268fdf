"""Results of exhaustive checks, and the partitioned scan that produces them."""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Tuple

from .errors import BudgetExceededError

DEFAULT_BUDGET = 10**7

# Scans estimated below this many elementary checks run in-process even when workers > 1.
PARALLEL_MIN_WORK = 50_000

RangeCheck = Callable[[int, int], tuple]


@dataclass(frozen=True)
class Verdict:
    """Outcome of one exhaustive check.

    ``passed`` is derived: a verdict passes exactly when it carries no
    counterexample. ``checks`` counts elementary identity checks performed;
    for a passing verdict it equals the analytic count of the configuration.
    """

    checks: int
    counterexample: Optional[dict] = None
    stage: Optional[str] = None
    details: dict = field(default_factory=dict)
    stages: Tuple["Verdict", ...] = ()
    elapsed_ms: Optional[float] = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "pass": self.passed,
            "checks": self.checks,
            "counterexample": self.counterexample,
        }
        if self.stage is not None:
            out["stage"] = self.stage
        if self.details:
            out["details"] = self.details
        if self.stages:
            out["stages"] = [s.to_json() for s in self.stages]
        return out


def require_budget(required: int, budget: Optional[int], what: str = "checks") -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if required > budget:
        raise BudgetExceededError(required, budget, what)


_TASK: Optional[RangeCheck] = None


def _run_chunk(bounds: Tuple[int, int]):
    assert _TASK is not None
    return _TASK(*bounds)


def _chunks(total: int, parts: int) -> list[Tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def scan(total: int, check_range: RangeCheck, workers: int = 1, work: Optional[int] = None) -> tuple:
    """Run ``check_range`` over ``[0, total)`` and merge to ``(checks, counterexample, tallies)``.

    ``check_range(start, stop)`` scans items in order, stops at the first
    failing item and returns the checks it performed together with that
    item's counterexample, optionally followed by a dict of integer tallies.
    Chunks are merged in index order, so the result is the least
    counterexample and the counts up to it, whatever the number of workers.

    Workers are forked processes, which inherit ``check_range`` (closures over
    strategies are not picklable). Scans whose estimated ``work`` is small
    stay in-process.
    """
    work = total if work is None else work
    if (
        workers <= 1
        or total < 2
        or work < PARALLEL_MIN_WORK
        or "fork" not in multiprocessing.get_all_start_methods()
    ):
        results = [check_range(0, total)]
    else:
        results = _scan_forked(total, check_range, workers)
    checks, tallies = 0, {}
    for result in results:
        checks += result[0]
        for key, value in (result[2] if len(result) > 2 else {}).items():
            tallies[key] = tallies.get(key, 0) + value
        if result[1] is not None:
            return checks, result[1], tallies
    return checks, None, tallies


def _scan_forked(total: int, check_range: RangeCheck, workers: int) -> list:
    global _TASK
    chunks = _chunks(total, workers * 4)
    _TASK = check_range
    try:
        with multiprocessing.get_context("fork").Pool(workers) as pool:
            results = pool.map(_run_chunk, chunks)
    finally:
        _TASK = None
    return results

"""Group-valued parity functions.

A parity function ``p`` over a group ``K`` shifts by exactly ``l - k`` when
any single position is recolored from ``l`` to ``k``::

    p(f[n|k]) - p(f[n|l]) == l - k

On finite-support colorings every coloring is eventually equal to the
all-zero coloring, so taking that as the common reference point gives the
canonical parity ``p(f) = -(f(0) + f(1) + ...)`` with no choices involved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .coloring import Coloring, coloring_at, count_colorings
from .errors import GroupMismatchError
from .groups import Element, GroupSpec
from .verdict import Verdict, require_budget, scan

PROVENANCES = ("canonical", "from-signal-biased", "from-starter-biased")


@dataclass(frozen=True, eq=False)
class ParityFunction:
    group: GroupSpec
    evaluator: Callable[[Coloring], Element]
    provenance: str = "canonical"
    chain: str = "canonical-parity"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def __call__(self, f: Coloring) -> Element:
        if f.group != self.group:
            raise GroupMismatchError(f"coloring over {f.group} given to a parity over {self.group}")
        return self.evaluator(f)


def canonical_parity(group: GroupSpec) -> ParityFunction:
    """``p(f) = -(sum of f over its support)``, summed in ascending index order."""
    neg, total = group._neg, group.sum

    def evaluate(f: Coloring) -> Element:
        return neg(total(f.values))

    return ParityFunction(group, evaluate, "canonical", "canonical-parity")


def eval_parity(p: ParityFunction, f: Coloring) -> Element:
    return p(f)


def parity_identity_holds(p: ParityFunction, f: Coloring, n: int, k: Element, l: Element) -> bool:
    """Single-instance form of the parity identity, used to replay counterexamples."""
    g = p.group
    return g.sub(p(f.update(n, k)), p(f.update(n, l))) == g.sub(l, k)


def check_parity(
    p: ParityFunction,
    group: Optional[GroupSpec] = None,
    horizon: int = 0,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
) -> Verdict:
    """Check the parity identity for every coloring below ``horizon``, position and color pair.

    Enumeration order is coloring, then position, then ``k``, then ``l``;
    a failure reports the first instance in that order.
    """
    started = time.perf_counter()
    group = p.group if group is None else group
    if group != p.group:
        raise GroupMismatchError(f"parity over {p.group} checked against {group}")
    group.require_finite("check_parity")
    els = group.element_list
    size = len(els)
    index_of = group.index_of
    sub = group.sub_table
    total = count_colorings(group, horizon)
    per_coloring = horizon * size * size
    require_budget(total * per_coloring, budget)
    evaluate = p.evaluator
    # want[ki] lists the index of l - k for every l.
    want = [[sub[li][ki] for li in range(size)] for ki in range(size)]

    def index(value) -> int:
        try:
            return index_of[value]
        except (KeyError, TypeError):
            raise GroupMismatchError(f"parity returned {value!r}, not an element of {group}") from None

    def check_range(start: int, stop: int):
        checks = 0
        for i in range(start, stop):
            f = coloring_at(group, horizon, i)
            for m in range(horizon):
                vals = [index(evaluate(f._set(m, e))) for e in els]
                for ki in range(size):
                    row = sub[vals[ki]]
                    got = [row[v] for v in vals]
                    if got != want[ki]:
                        li = next(j for j in range(size) if got[j] != want[ki][j])
                        checks += ki * size + li + 1
                        return checks, {
                            "clause": "parity",
                            "coloring": f.values_json(),
                            "position": m,
                            "k": group.to_json(els[ki]),
                            "l": group.to_json(els[li]),
                            "got": group.to_json(els[got[li]]),
                            "want": group.to_json(els[want[ki][li]]),
                        }
                checks += size * size
        return checks, None

    checks, cex, _ = scan(total, check_range, workers, total * per_coloring)
    if cex is not None:
        cex = {"stage": "parity", **cex}
    return Verdict(
        checks,
        cex,
        stage="parity",
        details={"colorings": total, "chain": p.chain},
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )

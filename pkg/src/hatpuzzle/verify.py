"""Exhaustive checkers for the predictor definitions and for the whole equivalence cycle.

Every checker enumerates all colorings supported below the horizon (so the
group must be finite), stops at the least counterexample in enumeration
order and reports how many elementary checks it performed.
"""

from __future__ import annotations

import time
from typing import Callable, Optional, Sequence

import numpy as np

from .coloring import Coloring, coloring_at, count_colorings
from .errors import GroupMismatchError, NotAParityFunctionError, UnsupportedError
from .groups import Cyclic, Element, GroupSpec
from .parity import ParityFunction, canonical_parity, check_parity
from .predictors import (
    BiasedPredictor,
    invert_parity_slot,
    SignalBiasedPredictor,
    StarterBiasedPredictor,
    biased_to_signal_biased,
    parity_to_biased,
    parity_to_signal_biased,
    parity_to_starter_biased,
    signal_biased_to_biased,
    signal_biased_to_parity,
    starter_biased_to_parity,
)
from .protocols import run_one_by_one, run_one_in_advance, run_simultaneous
from .verdict import Verdict, require_budget, scan


class _Indexer:
    """Maps strategy outputs to element indices, rejecting foreign values."""

    def __init__(self, group: GroupSpec):
        self.group = group
        self.index_of = group.index_of

    def __call__(self, value) -> int:
        try:
            return self.index_of[value]
        except (KeyError, TypeError):
            raise GroupMismatchError(
                f"strategy returned {value!r}, not an element of {self.group}"
            ) from None


def _setup(predictor, group: Optional[GroupSpec], horizon: Optional[int], what: str):
    group = predictor.group if group is None else group
    if group != predictor.group:
        raise GroupMismatchError(f"predictor over {predictor.group} checked against {group}")
    group.require_finite(what)
    horizon = predictor.horizon if horizon is None else horizon
    if horizon != predictor.horizon:
        raise ValueError(f"predictor has horizon {predictor.horizon}, asked to check {horizon}")
    return group, horizon


def _first_shift_failure(vals: Sequence[int], sub, want) -> Optional[tuple]:
    """First ``(ki, li)`` with ``vals[ki] - vals[li] != l - k``, or ``None``."""
    size = len(vals)
    for ki in range(size):
        row = sub[vals[ki]]
        got = [row[v] for v in vals]
        if got != want[ki]:
            li = next(j for j in range(size) if got[j] != want[ki][j])
            return ki, li, got[li]
    return None


def _shift_wants(group: GroupSpec):
    sub = group.sub_table
    size = len(group.element_list)
    return [[sub[li][ki] for li in range(size)] for ki in range(size)]


def _finish(stage: str, total_colorings: int, chain: str, started: float, result) -> Verdict:
    checks, cex = result[0], result[1]
    if cex is not None:
        cex = {"stage": stage, **cex}
    return Verdict(
        checks,
        cex,
        stage=stage,
        details={"colorings": total_colorings, "chain": chain},
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


# -- single-instance forms, used to replay counterexamples ---------------------------------


def biased_instance_holds(P: BiasedPredictor, f: Coloring) -> bool:
    g = P.group
    if P.horizon == 0:
        return True
    k = g.sub(P.guess(0, f), f.value(0))
    return all(P.guess(a, f) == g.add(f.value(a), k) for a in range(P.horizon))


def signal_instance_holds(P: SignalBiasedPredictor, f: Coloring, a: int, k=None, l=None) -> bool:
    """Clause 1 when ``k`` and ``l`` are omitted, clause 2 for the signal pair otherwise."""
    g = P.group
    if k is None:
        return P.respond(a, f, P.signal(f)) == f.value(a)
    return g.sub(P.respond(a, f, k), P.respond(a, f, l)) == g.sub(l, k)


def starter_instance_holds(P: StarterBiasedPredictor, f: Coloring, a: int, k=None, l=None) -> bool:
    g = P.group
    if k is None:
        return P.respond(a, P.start(f), f) == f.value(a)
    return g.sub(P.respond(a, k, f), P.respond(a, l, f)) == g.sub(l, k)


# -- checkers ----------------------------------------------------------------------------


def check_biased(
    P: BiasedPredictor,
    group: Optional[GroupSpec] = None,
    horizon: Optional[int] = None,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
) -> Verdict:
    """Every coloring: all guesses equal the true colors shifted by one common offset.

    The offset is read off agent 0 and then checked for every agent, so a
    coloring costs ``horizon`` checks.
    """
    started = time.perf_counter()
    group, n = _setup(P, group, horizon, "check_biased")
    total = count_colorings(group, n)
    require_budget(total * n, budget)
    index, sub, els = _Indexer(group), group.sub_table, group.element_list
    index_of = group.index_of

    def check_range(start, stop):
        checks = 0
        for i in range(start, stop):
            f = coloring_at(group, n, i)
            truth = [index_of[v] for v in f.padded(n)]
            declared = [index(P.guess(a, f)) for a in range(n)]
            if not n:
                continue
            k = sub[declared[0]][truth[0]]
            for a in range(n):
                checks += 1
                if sub[declared[a]][truth[a]] != k:
                    return checks, {
                        "clause": "biased",
                        "coloring": f.values_json(),
                        "agent": a,
                        "bias": group.to_json(els[k]),
                        "expected": group.to_json(group._add(els[truth[a]], els[k])),
                        "actual": group.to_json(els[declared[a]]),
                    }
        return checks, None

    return _finish("biased", total, P.chain, started, scan(total, check_range, workers, total * n))


def _check_receiver_clauses(
    group: GroupSpec,
    n: int,
    receivers: Sequence[int],
    first_move: Callable[[Coloring], Element],
    respond: Callable[[int, Coloring, Element], Element],
    clause2: bool,
    channel: str,
    workers: int,
    budget: Optional[int],
):
    """Shared loop of the signal-biased, starter-biased and signaling checks.

    Per coloring and receiver: clause 1 (correct on the actual first move),
    then, if ``clause2``, the shift identity for every ordered pair ``(k, l)``
    of first moves in enumeration order.
    """
    els = group.element_list
    size = len(els)
    total = count_colorings(group, n)
    per = len(receivers) * (1 + (size * size if clause2 else 0))
    require_budget(total * per, budget)
    index, sub, want = _Indexer(group), group.sub_table, _shift_wants(group)
    to_json = group.to_json

    def check_range(start, stop):
        checks = 0
        for i in range(start, stop):
            f = coloring_at(group, n, i)
            move = first_move(f)
            move_index = index(move)
            for a in receivers:
                if clause2:
                    vals = [index(respond(a, f, e)) for e in els]
                    answer = vals[move_index]
                else:
                    answer = index(respond(a, f, move))
                checks += 1
                if els[answer] != f.value(a):
                    return checks, {
                        "clause": 1,
                        "coloring": f.values_json(),
                        "agent": a,
                        channel: to_json(move),
                        "expected": to_json(f.value(a)),
                        "actual": to_json(els[answer]),
                    }
                if clause2:
                    bad = _first_shift_failure(vals, sub, want)
                    if bad is not None:
                        ki, li, got = bad
                        checks += ki * size + li + 1
                        return checks, {
                            "clause": 2,
                            "coloring": f.values_json(),
                            "agent": a,
                            "k": to_json(els[ki]),
                            "l": to_json(els[li]),
                            "expected": to_json(els[want[ki][li]]),
                            "actual": to_json(els[got]),
                        }
                    checks += size * size
        return checks, None

    return total, scan(total, check_range, workers, total * per)


def check_signal_biased(
    P: SignalBiasedPredictor,
    group: Optional[GroupSpec] = None,
    horizon: Optional[int] = None,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
) -> Verdict:
    """Both signal-biased clauses for every coloring, receiver and signal pair."""
    started = time.perf_counter()
    group, n = _setup(P, group, horizon, "check_signal_biased")
    total, result = _check_receiver_clauses(
        group, n, P.receiver_indices(), P.signal, P.respond, True, "signal", workers, budget
    )
    return _finish("signal-biased", total, P.chain, started, result)


def is_signaling(
    P: SignalBiasedPredictor,
    group: Optional[GroupSpec] = None,
    horizon: Optional[int] = None,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
) -> Verdict:
    """Clause 1 only: every receiver guesses right on the signaler's actual signal."""
    started = time.perf_counter()
    group, n = _setup(P, group, horizon, "is_signaling")
    total, result = _check_receiver_clauses(
        group, n, P.receiver_indices(), P.signal, P.respond, False, "signal", workers, budget
    )
    return _finish("signaling", total, P.chain, started, result)


def check_starter_biased(
    P: StarterBiasedPredictor,
    group: Optional[GroupSpec] = None,
    horizon: Optional[int] = None,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
) -> Verdict:
    """Both starter-biased clauses; the profile carries the true colors (correct earlier guesses)."""
    started = time.perf_counter()
    group, n = _setup(P, group, horizon, "check_starter_biased")

    def respond(a, f, k):
        return P.respond(a, k, f)

    total, result = _check_receiver_clauses(
        group, n, list(range(n)), P.start, respond, True, "declaration", workers, budget
    )
    return _finish("starter-biased", total, P.chain, started, result)


def check_same_parity(
    p: ParityFunction, q: ParityFunction, horizon: int, *, workers: int = 1, budget: Optional[int] = None
) -> Verdict:
    """Pointwise equality of two parity functions on every coloring below ``horizon``."""
    started = time.perf_counter()
    group = p.group
    if q.group != group:
        raise GroupMismatchError("parity functions over different groups")
    group.require_finite("check_same_parity")
    total = count_colorings(group, horizon)
    require_budget(total, budget)

    def check_range(start, stop):
        for i in range(start, stop):
            f = coloring_at(group, horizon, i)
            got, want = q.evaluator(f), p.evaluator(f)
            if got != want:
                return i - start + 1, {
                    "clause": "pointwise",
                    "coloring": f.values_json(),
                    "expected": group.to_json(want),
                    "actual": group.to_json(got),
                }
        return stop - start, None

    return _finish("pointwise", total, f"{q.chain} == {p.chain}", started, scan(total, check_range, workers))


def check_inversion(
    p: ParityFunction, horizon: int, *, workers: int = 1, budget: Optional[int] = None
) -> Verdict:
    """The closed-form slot inversion agrees with brute-force search for every ``(f, a, k)``.

    One check per triple; brute force also demands a unique solution, so a
    non-parity ``p`` is reported rather than raised.
    """
    started = time.perf_counter()
    group = p.group
    group.require_finite("check_inversion")
    els = group.element_list
    total = count_colorings(group, horizon)
    per = horizon * len(els)
    require_budget(total * per, budget)

    def check_range(start, stop):
        checks = 0
        for i in range(start, stop):
            f = coloring_at(group, horizon, i)
            for a in range(horizon):
                for k in els:
                    checks += 1
                    analytic = invert_parity_slot(p, f, a, k)
                    try:
                        searched = invert_parity_slot(p, f, a, k, brute_force=True)
                    except NotAParityFunctionError:
                        searched = None
                    if searched != analytic:
                        return checks, {
                            "clause": "inversion",
                            "coloring": f.values_json(),
                            "agent": a,
                            "k": group.to_json(k),
                            "expected": None if searched is None else group.to_json(searched),
                            "actual": group.to_json(analytic),
                        }
        return checks, None

    return _finish("inversion", total, p.chain, started, scan(total, check_range, workers, total * per))


def _check_runs(stage: str, predictor, horizon: int, run, bound: int, ok, workers, budget) -> Verdict:
    started = time.perf_counter()
    group = predictor.group
    group.require_finite(stage)
    total = count_colorings(group, horizon)
    require_budget(total * bound, budget)

    def check_range(start, stop):
        for i in range(start, stop):
            f = coloring_at(group, horizon, i)
            record = run(predictor, f)
            if not ok(record):
                return (i - start + 1) * bound, {
                    "clause": stage,
                    "coloring": f.values_json(),
                    "record": record.to_json(),
                }
        return (stop - start) * bound, None

    return _finish(stage, total, predictor.chain, started, scan(total, check_range, workers, total * bound))


def check_simultaneous_runs(P: BiasedPredictor, *, workers=1, budget=None) -> Verdict:
    """Every simultaneous run has a uniform bias witness."""
    return _check_runs(
        "run:simultaneous", P, P.horizon, run_simultaneous, P.horizon,
        lambda r: r.bias is not None or P.horizon == 0, workers, budget,
    )


def check_one_in_advance_runs(P: SignalBiasedPredictor, *, workers=1, budget=None) -> Verdict:
    """Every one-in-advance run has all receivers correct."""
    return _check_runs(
        "run:one-in-advance", P, P.horizon, run_one_in_advance, P.horizon - 1,
        lambda r: r.all_bound_correct(), workers, budget,
    )


def check_one_by_one_runs(P: StarterBiasedPredictor, *, workers=1, budget=None) -> Verdict:
    """Every one-by-one run has all agents after the starter correct."""
    return _check_runs(
        "run:one-by-one", P, P.horizon, run_one_by_one, P.horizon,
        lambda r: r.all_bound_correct(), workers, budget,
    )


def check_one_by_one_induction(P: StarterBiasedPredictor, *, workers=1, budget=None) -> Verdict:
    """Hearing declarations or true colors gives the same trace, and that trace reproduces the coloring.

    Two checks per coloring: trace equality of the two feeding modes, and
    equality of the post-starter declarations with the true coloring.
    """

    def run_both(P_, f):
        return run_one_by_one(P_, f, feed="declarations"), run_one_by_one(P_, f, feed="truth")

    def ok(records):
        heard, truth = records
        declared = [v for agent, v in heard.declarations[1:]]
        return heard == truth and declared == list(heard.coloring.padded(P.horizon))

    class _Pair(tuple):
        def to_json(self):
            return {"declarations": self[0].to_json(), "truth": self[1].to_json()}

    return _check_runs(
        "run:one-by-one-induction", P, P.horizon, lambda P_, f: _Pair(run_both(P_, f)), 2, ok, workers, budget
    )


# -- the Z2 signaling proposition over all table predictors ------------------------------


Z2 = Cyclic(2)


def _visible_index(values: Sequence[int], skip: int) -> int:
    """Lexicographic index of the Z2 colors at every position except ``skip``."""
    out = 0
    for pos, v in enumerate(values):
        if pos != skip:
            out = out * 2 + v
    return out


def table_space(horizon: int, signaler: int = 0) -> dict:
    """Sizes of the Z2 table-predictor space: one table per agent, keyed by what it sees."""
    if not 0 <= signaler < horizon:
        raise ValueError(f"signaler {signaler} is outside the agents 0..{horizon - 1}")
    visible = 2 ** (horizon - 1)
    signaler_tables = 2**visible
    receiver_tables = 2 ** (2 * visible)
    return {
        "visible": visible,
        "signaler_tables": signaler_tables,
        "receiver_tables": receiver_tables,
        "total": signaler_tables * receiver_tables ** (horizon - 1),
    }


def table_predictor(horizon: int, signaler: int, signaler_table: int, receiver_tables: Sequence[int]) -> SignalBiasedPredictor:
    """A Z2 signal predictor given by lookup tables packed into integers.

    Bit ``j`` of ``signaler_table`` is the signal when the signaler sees the
    colors with lexicographic index ``j``. Bit ``2*j + x`` of a receiver
    table is its guess when it sees index ``j`` and hears signal ``x``.
    Receiver tables are listed for the receivers in ascending order.
    """
    receivers_order = [a for a in range(horizon) if a != signaler]
    if len(receiver_tables) != len(receivers_order):
        raise ValueError("need one table per receiver")

    def signal(f: Coloring) -> int:
        return (signaler_table >> _visible_index(f.padded(horizon), signaler)) & 1

    def make(a: int, table: int):
        return lambda f, x: (table >> (2 * _visible_index(f.padded(horizon), a) + x)) & 1

    receivers: list = [None] * horizon
    for a, table in zip(receivers_order, receiver_tables):
        receivers[a] = make(a, table)
    tables = ",".join(str(t) for t in (signaler_table, *receiver_tables))
    return SignalBiasedPredictor(Z2, horizon, signaler, signal, receivers, f"table({tables})")


def table_predictor_at(horizon: int, signaler: int, index: int) -> SignalBiasedPredictor:
    """The ``index``-th table predictor: signaler table most significant, then receivers ascending."""
    space = table_space(horizon, signaler)
    digits = []
    for _ in range(horizon - 1):
        index, r = divmod(index, space["receiver_tables"])
        digits.append(r)
    if index >= space["signaler_tables"]:
        raise IndexError("predictor index out of range")
    return table_predictor(horizon, signaler, index, digits[::-1])


def table_flags(horizon: int, signaler: int = 0, signaler_tables: Optional[range] = None):
    """Vectorized clause evaluation for every Z2 table predictor.

    Returns boolean arrays ``(signaling, signal_biased)`` of shape
    ``(S, R, R, ...)`` with one receiver axis per receiver; entry
    ``[s, r1, r2, ...]`` belongs to ``table_predictor(horizon, signaler, s, [r1, r2, ...])``.
    """
    space = table_space(horizon, signaler)
    if signaler_tables is None:
        signaler_tables = range(space["signaler_tables"])
    S = np.arange(signaler_tables.start, signaler_tables.stop, dtype=np.int64)
    R = np.arange(space["receiver_tables"], dtype=np.int64)
    receivers = [a for a in range(horizon) if a != signaler]
    colorings = [tuple((i >> (horizon - 1 - pos)) & 1 for pos in range(horizon)) for i in range(2**horizon)]

    signaling = np.ones((len(S),) + (len(R),) * len(receivers), dtype=bool)
    biased = np.ones_like(signaling)
    for axis, a in enumerate(receivers):
        correct = np.ones((len(S), len(R)), dtype=bool)
        shifts = np.ones(len(R), dtype=bool)
        for values in colorings:
            signal = (S >> _visible_index(values, signaler)) & 1
            seen = 2 * _visible_index(values, a)
            guess = (R[None, :] >> (seen + signal[:, None])) & 1
            correct &= guess == values[a]
            out = [(R >> (seen + x)) & 1 for x in (0, 1)]
            for k in (0, 1):
                for l in (0, 1):
                    shifts &= (out[k] - out[l]) % 2 == (l - k) % 2
        shape = [len(S)] + [1] * len(receivers)
        shape[axis + 1] = len(R)
        signaling &= correct.reshape(shape)
        biased &= shifts.reshape([1] + [len(R) if j == axis else 1 for j in range(len(receivers))])
    return signaling, signaling & biased


def _proposition_by_objects(horizon: int, signaler: int, start: int, stop: int):
    """Object-level route: build every predictor and run the generic checkers on it."""
    tallies = {"signaling": 0, "signal_biased": 0}
    for index in range(start, stop):
        P = table_predictor_at(horizon, signaler, index)
        if not is_signaling(P, Z2, horizon):
            continue
        tallies["signaling"] += 1
        if check_signal_biased(P, Z2, horizon):
            tallies["signal_biased"] += 1
        else:
            return index - start + 1, {"predictor": index, "tables": P.chain}, tallies
    return stop - start, None, tallies


def check_signaling_implies_signal_biased(
    group: GroupSpec = Z2,
    horizon: int = 2,
    signaler: int = 0,
    *,
    workers: int = 1,
    budget: Optional[int] = None,
    engine: str = "vectorized",
) -> Verdict:
    """Over Z2, every signaling table predictor is signal-biased.

    Enumerates the whole table-predictor space (one check per predictor).
    ``engine="objects"`` evaluates each predictor through the generic
    checkers instead of the vectorized bit arithmetic; it is far slower and
    exists to cross-check the fast route.
    """
    started = time.perf_counter()
    if group != Z2:
        raise UnsupportedError(f"the signaling proposition is stated for z2 only, got {group}")
    space = table_space(horizon, signaler)
    require_budget(space["total"], budget, "predictors")
    per_signaler = space["total"] // space["signaler_tables"]

    if engine == "objects":
        result = scan(
            space["total"], lambda a, b: _proposition_by_objects(horizon, signaler, a, b), workers, space["total"] * 64
        )
    elif engine == "vectorized":

        def check_range(start, stop):
            signaling, biased = table_flags(horizon, signaler, range(start, stop))
            tallies = {"signaling": int(signaling.sum()), "signal_biased": int(biased.sum())}
            violations = np.argwhere(signaling & ~biased)
            if len(violations):
                first = violations[0]
                index = int(np.ravel_multi_index(tuple(first), signaling.shape)) + start * per_signaler
                return index - start * per_signaler + 1, {"predictor": index}, tallies
            return (stop - start) * per_signaler, None, tallies

        result = scan(space["signaler_tables"], check_range, workers, space["total"])
    else:
        raise ValueError(f"unknown engine {engine!r}")

    checks, cex, tallies = result
    details = {
        "horizon": horizon,
        "signaler": signaler,
        "predictors": space["total"],
        "signaling": tallies.get("signaling", 0),
        "signal_biased": tallies.get("signal_biased", 0),
    }
    if cex is not None:
        cex = {"stage": "signaling-proposition", "clause": "signaling-not-signal-biased", **cex}
    return Verdict(
        checks, cex, stage="signaling-proposition", details=details,
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


# -- the full cycle -----------------------------------------------------------------------


def equivalence_suite(
    group: GroupSpec, horizon: int, signaler: int = 0, *, workers: int = 1, budget: Optional[int] = None
) -> Verdict:
    """Run every transformation of the cycle from the canonical parity and check each result.

    Stages, in order: canonical parity; parity -> biased;
    biased -> signal-biased; that signal-biased -> biased and -> parity;
    parity -> signal-biased; parity -> starter-biased; starter-biased ->
    parity (pointwise against the canonical parity); then protocol runs over
    every coloring for the simultaneous, one-in-advance and one-by-one
    engines. Every stage runs even after a failure.
    """
    started = time.perf_counter()
    group.require_finite("equivalence_suite")
    if not 0 <= signaler < horizon:
        raise ValueError(f"signaler {signaler} is outside the agents 0..{horizon - 1}")
    opts = {"workers": workers, "budget": budget}
    stages = []

    def stage(name: str, verdict: Verdict) -> None:
        cex = verdict.counterexample
        if cex is not None:
            cex = {**cex, "stage": name}
        stages.append(
            Verdict(verdict.checks, cex, stage=name, details=verdict.details, elapsed_ms=verdict.elapsed_ms)
        )

    p = canonical_parity(group)
    stage("parity", check_parity(p, group, horizon, **opts))

    biased = parity_to_biased(p, horizon)
    stage("parity->biased", check_biased(biased, group, horizon, **opts))

    sb_from_biased = biased_to_signal_biased(biased, signaler)
    stage("biased->signal-biased", check_signal_biased(sb_from_biased, group, horizon, **opts))
    stage("signal-biased->biased", check_biased(signal_biased_to_biased(sb_from_biased), group, horizon, **opts))

    stage("signal-biased->parity", check_parity(signal_biased_to_parity(sb_from_biased), group, horizon, **opts))

    sb_from_parity = parity_to_signal_biased(p, signaler, horizon)
    stage("parity->signal-biased", check_signal_biased(sb_from_parity, group, horizon, **opts))

    starter = parity_to_starter_biased(p, horizon)
    stage("parity->starter-biased", check_starter_biased(starter, group, horizon, **opts))
    stage("starter-biased->parity", check_same_parity(p, starter_biased_to_parity(starter), horizon, **opts))

    stage("run:simultaneous", check_simultaneous_runs(biased, **opts))
    stage("run:one-in-advance", check_one_in_advance_runs(sb_from_parity, **opts))
    stage("run:one-by-one", check_one_by_one_runs(starter, **opts))

    failing = next((s for s in stages if not s.passed), None)
    return Verdict(
        sum(s.checks for s in stages),
        None if failing is None else failing.counterexample,
        stage="equivalence",
        details={"group": str(group), "horizon": horizon, "signaler": signaler},
        stages=tuple(stages),
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )

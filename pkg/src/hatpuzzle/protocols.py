"""Simulation of the three declaration protocols, producing full run traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple, Union

from .coloring import Coloring
from .errors import GroupMismatchError
from .groups import Element
from .predictors import STARTER, BiasedPredictor, SignalBiasedPredictor, StarterBiasedPredictor

SIMULTANEOUS = "simultaneous"
ONE_IN_ADVANCE = "one-in-advance"
ONE_BY_ONE = "one-by-one"
PROTOCOLS = (SIMULTANEOUS, ONE_IN_ADVANCE, ONE_BY_ONE)

EXEMPT = "exempt"

Agent = Union[int, str]
Flag = Union[bool, str]


@dataclass(frozen=True)
class RunRecord:
    """Trace of one run. ``correct[i]`` belongs to ``declarations[i]``.

    In JSON the coloring is written out to the horizon, one value per indexed agent.
    """

    protocol: str
    coloring: Coloring
    declarations: Tuple[Tuple[Agent, Element], ...]
    correct: Tuple[Flag, ...]
    bias: Optional[Element] = None
    horizon: int = 0

    def correct_agents(self) -> list:
        return [agent for (agent, _), ok in zip(self.declarations, self.correct) if ok is True]

    def all_bound_correct(self) -> bool:
        """Every agent covered by the protocol's correctness guarantee guessed right."""
        return all(ok is True for ok in self.correct if ok != EXEMPT)

    def to_json(self) -> dict[str, Any]:
        g = self.coloring.group
        return {
            "protocol": self.protocol,
            "coloring": [g.to_json(v) for v in self.coloring.padded(max(self.horizon, len(self.coloring.values)))],
            "declarations": [[agent, g.to_json(v)] for agent, v in self.declarations],
            "correct": list(self.correct),
            "bias": None if self.bias is None else g.to_json(self.bias),
        }


def _validate(predictor, f: Coloring) -> None:
    if f.group != predictor.group:
        raise GroupMismatchError(f"coloring over {f.group}, predictor over {predictor.group}")
    if len(f.values) > predictor.horizon:
        raise ValueError(f"coloring {f!r} has support beyond the horizon {predictor.horizon}")


def run_simultaneous(P: BiasedPredictor, f: Coloring) -> RunRecord:
    """Everybody declares at once. ``bias`` is the common offset, if there is one."""
    _validate(P, f)
    g = P.group
    declarations = tuple((a, P.guess(a, f)) for a in range(P.horizon))
    correct = tuple(v == f.value(a) for a, v in declarations)
    bias = None
    if declarations:
        k = g.sub(declarations[0][1], f.value(0))
        if all(v == g._add(f.value(a), k) for a, v in declarations):
            bias = k
    return RunRecord(SIMULTANEOUS, f, declarations, correct, bias, P.horizon)


def run_one_in_advance(P: SignalBiasedPredictor, f: Coloring) -> RunRecord:
    """The signaler declares first; every other agent then answers the same signal."""
    _validate(P, f)
    signal = P.signal(f)
    declarations = [(P.signaler, signal)]
    correct: list[Flag] = [EXEMPT]
    for a in P.receiver_indices():
        v = P.respond(a, f, signal)
        declarations.append((a, v))
        correct.append(v == f.value(a))
    return RunRecord(ONE_IN_ADVANCE, f, tuple(declarations), tuple(correct), None, P.horizon)


def run_one_by_one(P: StarterBiasedPredictor, f: Coloring, *, feed: str = "declarations") -> RunRecord:
    """Starter ``t`` declares, then agents ``0, 1, ...`` in order.

    Agent ``a`` hears the declarations of every earlier agent and sees every
    later hat. With ``feed="declarations"`` (the protocol as played) the
    profile carries what was heard; ``feed="truth"`` substitutes the true
    colors instead, which is only a diagnostic for comparing the two.
    """
    if feed not in ("declarations", "truth"):
        raise ValueError(f"feed must be 'declarations' or 'truth', got {feed!r}")
    _validate(P, f)
    k = P.start(f)
    declarations: list[Tuple[Agent, Element]] = [(STARTER, k)]
    correct: list[Flag] = [EXEMPT]
    profile = f
    for a in range(P.horizon):
        v = P.respond(a, k, profile)
        declarations.append((a, v))
        correct.append(v == f.value(a))
        if feed == "declarations":
            # Slots below the next agent now hold heard values, the rest true colors.
            profile = profile.update(a, v)
    return RunRecord(ONE_BY_ONE, f, tuple(declarations), tuple(correct), None, P.horizon)


def declared_coloring(record: RunRecord) -> Sequence[Element]:
    """Declarations of the indexed agents, in agent order, skipping the starter."""
    by_agent = {a: v for a, v in record.declarations if a != STARTER}
    return [by_agent[a] for a in sorted(by_agent)]

"""Predictors for the three declaration protocols and the transformations between them.

Strategies are plain callables. Every predictor hides an agent's own hat
(``f[a|0]``) before calling that agent's strategy, so no strategy can read
the color it is supposed to guess. The transformations follow the
constructive equivalence between

* biased predictors (complete visibility, everybody declares at once),
* signal-biased predictors (one signaler declares first, the rest at once),
* starter-biased predictors (one-way visibility, declarations one by one
  after an extra starter agent ``t``),
* parity functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .coloring import Coloring
from .errors import NotAParityFunctionError
from .groups import Element, GroupSpec
from .parity import ParityFunction

Strategy = Callable[[Coloring], Element]
Receiver = Callable[[Coloring, Element], Element]
StarterReceiver = Callable[[Element, Coloring], Element]

STARTER = "t"


def _check_agent(index: int, horizon: int, what: str) -> None:
    if not 0 <= index < horizon:
        raise ValueError(f"{what} {index} is outside the agents 0..{horizon - 1}")


@dataclass(frozen=True, eq=False)
class BiasedPredictor:
    """Simultaneous-protocol predictor: ``strategies[a]`` guesses for agent ``a``."""

    group: GroupSpec
    horizon: int
    strategies: Sequence[Strategy]
    chain: str = "biased"

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if len(self.strategies) != self.horizon:
            raise ValueError("need exactly one strategy per agent")

    def guess(self, a: int, f: Coloring) -> Element:
        return self.strategies[a](f.mask_self(a))


@dataclass(frozen=True, eq=False)
class SignalBiasedPredictor:
    """One-in-advance predictor. ``receivers[signaler]`` is unused and may be ``None``."""

    group: GroupSpec
    horizon: int
    signaler: int
    signaler_strategy: Strategy
    receivers: Sequence[Optional[Receiver]]
    chain: str = "signal-biased"

    def __post_init__(self):
        object.__setattr__(self, "receivers", tuple(self.receivers))
        _check_agent(self.signaler, self.horizon, "signaler")
        if len(self.receivers) != self.horizon:
            raise ValueError("receivers must have one slot per agent")

    def receiver_indices(self) -> list[int]:
        return [a for a in range(self.horizon) if a != self.signaler]

    def signal(self, f: Coloring) -> Element:
        return self.signaler_strategy(f.mask_self(self.signaler))

    def respond(self, a: int, f: Coloring, signal: Element) -> Element:
        if a == self.signaler:
            raise ValueError("the signaler has no receiver strategy")
        return self.receivers[a](f.mask_self(a), signal)  # type: ignore[misc]


@dataclass(frozen=True, eq=False)
class StarterBiasedPredictor:
    """One-by-one predictor over agents ``t, 0, 1, ..., horizon-1``.

    The starter ``t`` sees every agent of ``0..horizon-1``. Agent ``a`` gets
    the starter's declaration and a profile whose positions below ``a``
    carry what it heard, position ``a`` is hidden and positions above ``a``
    carry the colors it sees.
    """

    group: GroupSpec
    horizon: int
    starter_strategy: Strategy
    receivers: Sequence[StarterReceiver]
    chain: str = "starter-biased"

    def __post_init__(self):
        object.__setattr__(self, "receivers", tuple(self.receivers))
        if len(self.receivers) != self.horizon:
            raise ValueError("need exactly one receiver strategy per agent")

    def start(self, f: Coloring) -> Element:
        return self.starter_strategy(f)

    def respond(self, a: int, declaration: Element, profile: Coloring) -> Element:
        return self.receivers[a](declaration, profile.mask_self(a))


def invert_parity_slot(
    p: ParityFunction, f: Coloring, a: int, k: Element, *, brute_force: bool = False
) -> Element:
    """The color ``i`` with ``p(f[a|i]) == k``.

    The analytic answer ``p(f[a|0]) - k`` holds for any parity function and
    any group. ``brute_force=True`` searches the finite group instead and
    raises :class:`NotAParityFunctionError` unless exactly one ``i`` works.
    """
    g = p.group
    if not brute_force:
        return g._add(p.evaluator(f.mask_self(a)), g._neg(k))
    g.require_finite("brute-force inversion")
    hits = [i for i in g.element_list if p.evaluator(f._set(a, i)) == k]
    if len(hits) != 1:
        raise NotAParityFunctionError(
            f"p(f[{a}|i]) = {k!r} has {len(hits)} solutions for f = {f!r}"
        )
    return hits[0]


def parity_to_biased(p: ParityFunction, horizon: int) -> BiasedPredictor:
    """Agent ``a`` declares ``p(f[a|0])``; every guess is then off by ``p(f)``."""
    evaluate = p.evaluator

    def make(a: int) -> Strategy:
        return lambda f: evaluate(f.mask_self(a))

    return BiasedPredictor(p.group, horizon, [make(a) for a in range(horizon)], f"{p.chain} -> biased")


def biased_to_signal_biased(P: BiasedPredictor, s: int) -> SignalBiasedPredictor:
    """Signaler keeps its biased guess; receiver ``a`` answers ``G_a(f) - (x - f(s))`` on signal ``x``."""
    _check_agent(s, P.horizon, "signaler")
    g = P.group
    add, neg = g._add, g._neg

    def make(a: int) -> Receiver:
        def receive(f: Coloring, x: Element) -> Element:
            return add(P.guess(a, f), neg(add(x, neg(f.value(s)))))

        return receive

    receivers = [None if a == s else make(a) for a in range(P.horizon)]
    return SignalBiasedPredictor(
        g, P.horizon, s, P.strategies[s], receivers, f"{P.chain} -> signal-biased(s={s})"
    )


def signal_biased_to_biased(P: SignalBiasedPredictor) -> BiasedPredictor:
    """The signaler keeps its strategy; everyone else feeds the signaler's visible color as the signal."""
    s = P.signaler

    def make(a: int) -> Strategy:
        if a == s:
            return P.signal
        return lambda f: P.respond(a, f, f.value(s))

    return BiasedPredictor(P.group, P.horizon, [make(a) for a in range(P.horizon)], f"{P.chain} -> biased")


def signal_biased_to_parity(P: SignalBiasedPredictor) -> ParityFunction:
    """``p(f) = G_s(f) - f(s)``."""
    g, s = P.group, P.signaler
    add, neg = g._add, g._neg

    def evaluate(f: Coloring) -> Element:
        return add(P.signal(f), neg(f.value(s)))

    return ParityFunction(g, evaluate, "from-signal-biased", f"{P.chain} -> parity")


def parity_to_signal_biased(p: ParityFunction, s: int, horizon: int) -> SignalBiasedPredictor:
    """Signal ``p(f[s|0])``; receiver ``a`` on signal ``k`` declares the ``i`` with ``p(f[a|i][s|0]) = k``.

    Hiding slot ``s`` on both sides keeps the signaler's strategy independent
    of its own hat while leaving both signal-biased clauses intact.
    """
    _check_agent(s, horizon, "signaler")
    evaluate = p.evaluator

    def signaler(f: Coloring) -> Element:
        return evaluate(f.mask_self(s))

    def make(a: int) -> Receiver:
        return lambda f, k: invert_parity_slot(p, f.mask_self(s), a, k)

    receivers = [None if a == s else make(a) for a in range(horizon)]
    return SignalBiasedPredictor(
        p.group, horizon, s, signaler, receivers, f"{p.chain} -> signal-biased(s={s})"
    )


def starter_biased_to_parity(P: StarterBiasedPredictor) -> ParityFunction:
    """The starter's declaration is the parity."""
    return ParityFunction(P.group, P.starter_strategy, "from-starter-biased", f"{P.chain} -> parity")


def parity_to_starter_biased(p: ParityFunction, horizon: int) -> StarterBiasedPredictor:
    """Starter declares ``p(f)``; agent ``a`` on declaration ``k`` solves ``p(profile[a|i]) = k``."""

    def make(a: int) -> StarterReceiver:
        return lambda k, profile: invert_parity_slot(p, profile, a, k)

    return StarterBiasedPredictor(
        p.group, horizon, p.evaluator, [make(a) for a in range(horizon)], f"{p.chain} -> starter-biased"
    )

import itertools
import json

import pytest

import hatpuzzle.verdict as verdict_mod
from hatpuzzle.coloring import Coloring
from hatpuzzle.errors import BudgetExceededError, UnsupportedError
from hatpuzzle.groups import Cyclic, Integers, parse_group_spec
from hatpuzzle.parity import ParityFunction, canonical_parity, check_parity, parity_identity_holds
from hatpuzzle.predictors import (
    BiasedPredictor,
    SignalBiasedPredictor,
    StarterBiasedPredictor,
    parity_to_biased,
    parity_to_signal_biased,
    parity_to_starter_biased,
)
from hatpuzzle.verify import (
    Z2,
    biased_instance_holds,
    check_biased,
    check_one_by_one_induction,
    check_signal_biased,
    check_signaling_implies_signal_biased,
    check_starter_biased,
    equivalence_suite,
    is_signaling,
    signal_instance_holds,
    starter_instance_holds,
    table_flags,
    table_predictor,
    table_predictor_at,
    table_space,
)

Z3 = Cyclic(3)


# -- biased ------------------------------------------------------------------------------


def test_check_biased_canonical_z3():
    v = check_biased(parity_to_biased(canonical_parity(Z3), 4))
    assert v.passed and v.details["colorings"] == 81 and v.checks == 81 * 4


def test_check_biased_all_zero_declarer_fails():
    P = BiasedPredictor(Z2, 2, [lambda f: 0, lambda f: 0])
    v = check_biased(P)
    assert not v.passed
    cex = v.counterexample
    assert cex["coloring"] == [0, 1] and cex["agent"] == 1
    assert v.checks == 4
    assert not biased_instance_holds(P, Coloring.from_json(cex["coloring"], Z2))


def test_check_biased_single_agent_always_passes():
    for const in range(3):
        assert check_biased(BiasedPredictor(Z3, 1, [lambda f, c=const: c]))


def test_infinite_group_is_unsupported():
    g = Integers()
    with pytest.raises(UnsupportedError):
        check_biased(parity_to_biased(canonical_parity(g), 2))
    with pytest.raises(UnsupportedError):
        equivalence_suite(g, 3, 0)


# -- signal-biased, signaling, starter-biased ---------------------------------------------


def test_signal_biased_examples():
    v = check_signal_biased(parity_to_signal_biased(canonical_parity(Z2), 1, 3))
    assert v.passed and v.checks == 8 * 2 * (1 + 4)


def test_receiver_constant_in_signal_fails_clause_2():
    # signal and guess are both 0: clause 1 holds at the all-zero coloring, clause 2 does not
    P = SignalBiasedPredictor(Z3, 2, 0, lambda f: 0, [None, lambda f, x: 0])
    v = check_signal_biased(P)
    cex = v.counterexample
    assert cex["clause"] == 2 and cex["coloring"] == [] and (cex["k"], cex["l"]) == (0, 1)
    assert v.checks == 1 + 2  # clause 1, then (0, 0) passes and (0, 1) fails
    f = Coloring.from_json(cex["coloring"], Z3)
    assert signal_instance_holds(P, f, 1)
    assert not signal_instance_holds(P, f, cex["agent"], cex["k"], cex["l"])


def test_is_signaling():
    P = parity_to_signal_biased(canonical_parity(Z3), 0, 3)
    assert check_signal_biased(P) and is_signaling(P)
    echo = SignalBiasedPredictor(Z2, 2, 0, lambda f: 0, [None, lambda f, x: 0])
    v = is_signaling(echo)
    assert not v.passed and v.counterexample["coloring"] == [0, 1]
    assert not signal_instance_holds(echo, Coloring(Z2, (0, 1)), 1)
    relay = SignalBiasedPredictor(Z2, 2, 0, lambda f: f[1], [None, lambda f, x: x])
    assert is_signaling(relay).checks == 4


def test_starter_biased_checks():
    g = Z3
    P = parity_to_starter_biased(canonical_parity(g), 3)
    v = check_starter_biased(P)
    assert v.passed and v.checks == 27 * 3 * (1 + 9)
    assert check_starter_biased(parity_to_starter_biased(canonical_parity(g), 0)).checks == 0

    p = canonical_parity(g)
    deaf = StarterBiasedPredictor(g, 2, p.evaluator, [lambda k, prof, a=a: prof[a] for a in range(2)])
    w = check_starter_biased(deaf)
    assert w.counterexample["clause"] in (1, 2)
    cex = w.counterexample
    f = Coloring.from_json(cex["coloring"], g)
    if cex["clause"] == 2:
        assert not starter_instance_holds(deaf, f, cex["agent"], cex["k"], cex["l"])
    else:
        assert not starter_instance_holds(deaf, f, cex["agent"])


def test_starter_ignoring_declaration_fails_clause_2():
    g = Z2
    p = canonical_parity(g)
    base = parity_to_starter_biased(p, 2)
    # correct on the real declaration, but the answer does not move with it
    ignore = StarterBiasedPredictor(g, 2, p.evaluator, [lambda k, prof, a=a: base.respond(a, p(prof), prof) for a in range(2)])
    v = check_starter_biased(ignore)
    cex = v.counterexample
    assert cex["clause"] == 2
    assert not starter_instance_holds(ignore, Coloring.from_json(cex["coloring"], g), cex["agent"], cex["k"], cex["l"])


def test_induction_check():
    for g, n in [(Z2, 4), (Z3, 3)]:
        v = check_one_by_one_induction(parity_to_starter_biased(canonical_parity(g), n))
        assert v.passed and v.checks == 2 * g.order**n


# -- Z2 signaling proposition ------------------------------------------------------------


def oracle_proposition(horizon, s):
    """Independent count over plain dict tables: (predictors, signaling, signal-biased)."""
    colorings = list(itertools.product((0, 1), repeat=horizon))
    others = [a for a in range(horizon) if a != s]

    def seen(f, a):
        return tuple(v for i, v in enumerate(f) if i != a)

    views = sorted({seen(f, 0) for f in colorings})
    signal_tables = [dict(zip(views, bits)) for bits in itertools.product((0, 1), repeat=len(views))]
    keys = [(v, x) for v in views for x in (0, 1)]
    receiver_tables = [dict(zip(keys, bits)) for bits in itertools.product((0, 1), repeat=len(keys))]
    total = signaling = biased = 0
    for sig in signal_tables:
        for tables in itertools.product(receiver_tables, repeat=len(others)):
            total += 1
            ok1 = all(t[(seen(f, a), sig[seen(f, s)])] == f[a] for f in colorings for a, t in zip(others, tables))
            if not ok1:
                continue
            signaling += 1
            ok2 = all(
                (t[(seen(f, a), k)] - t[(seen(f, a), l)]) % 2 == (l - k) % 2
                for f in colorings for a, t in zip(others, tables) for k in (0, 1) for l in (0, 1)
            )
            biased += ok2
    return total, signaling, biased


@pytest.mark.parametrize("s", [0, 1])
def test_proposition_n2_matches_oracle(s):
    v = check_signaling_implies_signal_biased(Z2, 2, s)
    total, signaling, biased = oracle_proposition(2, s)
    assert v.passed
    assert (v.details["predictors"], v.details["signaling"], v.details["signal_biased"]) == (total, signaling, biased)
    assert total == 64 and v.checks == 64


def test_proposition_objects_engine_agrees():
    fast = check_signaling_implies_signal_biased(Z2, 2, 0)
    slow = check_signaling_implies_signal_biased(Z2, 2, 0, engine="objects")
    assert fast.to_json() == slow.to_json()


def test_table_flags_agree_with_object_checkers_on_samples():
    import random

    rng = random.Random(7)
    signaling, biased = table_flags(3, 1)
    flat_s, flat_b = signaling.ravel(), biased.ravel()
    picks = [int(i) for i in flat_s.nonzero()[0]] + rng.sample(range(flat_s.size), 150)
    for index in picks:
        P = table_predictor_at(3, 1, index)
        assert bool(flat_s[index]) == is_signaling(P).passed
        assert bool(flat_b[index]) == (is_signaling(P).passed and check_signal_biased(P).passed)


def test_relay_table_predictor_is_signaling():
    # n=2, s=0: signal f(1) (bit j is the signal on view j), receiver echoes the signal
    P = table_predictor(2, 0, 0b10, [0b1010])
    for values in itertools.product((0, 1), repeat=2):
        f = Coloring(Z2, values)
        assert P.signal(f) == values[1] and P.respond(1, f, 0) == 0 and P.respond(1, f, 1) == 1
    assert is_signaling(P) and check_signal_biased(P)


def test_proposition_n3_counts():
    v = check_signaling_implies_signal_biased(Z2, 3, 0)
    assert v.passed and v.checks == 1_048_576
    assert (v.details["signaling"], v.details["signal_biased"]) == (2, 2)


def test_proposition_refusals():
    assert table_space(4)["total"] == 2**56
    with pytest.raises(BudgetExceededError):
        check_signaling_implies_signal_biased(Z2, 4, 0)
    with pytest.raises(UnsupportedError):
        check_signaling_implies_signal_biased(Z3, 2, 0)


# -- equivalence suite -------------------------------------------------------------------


@pytest.mark.parametrize("spec, n, s", [("z2", 4, 0), ("z3", 3, 2), ("z2xz2", 3, 1)])
def test_equivalence_examples(spec, n, s):
    v = equivalence_suite(parse_group_spec(spec), n, s)
    assert v.passed and all(stage.passed for stage in v.stages)
    names = [stage.stage for stage in v.stages]
    assert names[0] == "parity" and names[-1] == "run:one-by-one" and len(names) == 11
    assert v.checks == sum(stage.checks for stage in v.stages)


def test_equivalence_independent_of_signaler():
    g = parse_group_spec("z2xz3")
    results = [equivalence_suite(g, 3, s) for s in range(3)]
    assert all(r.passed for r in results)
    assert len({r.checks for r in results}) == 1


def test_equivalence_rejects_bad_signaler():
    with pytest.raises(ValueError):
        equivalence_suite(Z2, 2, 2)


# -- determinism -------------------------------------------------------------------------


def _payload(v):
    return json.dumps(v.to_json(), sort_keys=True)


def test_parallel_scans_are_deterministic(monkeypatch):
    monkeypatch.setattr(verdict_mod, "PARALLEL_MIN_WORK", 0)
    g = Cyclic(4)
    wrong = ParityFunction(g, lambda f: g.neg(g.sum(f.values[:-1])))
    cases = [
        lambda w: check_parity(canonical_parity(g), g, 3, workers=w),
        lambda w: check_parity(wrong, g, 3, workers=w),
        lambda w: equivalence_suite(Z3, 3, 1, workers=w),
        lambda w: check_signaling_implies_signal_biased(Z2, 3, 0, workers=w),
        lambda w: check_biased(BiasedPredictor(Z3, 3, [lambda f: 0] * 3), workers=w),
    ]
    for case in cases:
        payloads = {_payload(case(w)) for w in (1, 2, 8)}
        assert len(payloads) == 1


def test_least_counterexample_regardless_of_workers(monkeypatch):
    monkeypatch.setattr(verdict_mod, "PARALLEL_MIN_WORK", 0)
    g = Cyclic(4)
    const = ParityFunction(g, lambda f: 0)
    for w in (1, 2, 8):
        v = check_parity(const, g, 5, workers=w)
        cex = v.counterexample
        assert (v.checks, cex["position"], cex["k"], cex["l"]) == (2, 0, 0, 1)
        assert not parity_identity_holds(const, Coloring.from_json(cex["coloring"], g), 0, 0, 1)


def test_check_inversion():
    from hatpuzzle.verify import check_inversion

    v = check_inversion(canonical_parity(Z3), 3)
    assert v.passed and v.checks == 27 * 3 * 3
    g = Z3
    skew = ParityFunction(g, lambda f: g.add(g.neg(g.sum(f.values)), g.add(f[1], f[1])))
    w = check_inversion(skew, 2)
    assert not w.passed and w.counterexample["agent"] == 1

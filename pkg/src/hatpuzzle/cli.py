"""Command-line driver: ``hatpuzzle verify | run | transform``.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 unsupported
configuration (infinite group, exhausted check budget).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import __version__
from .coloring import Coloring
from .errors import GroupSpecParseError, HatPuzzleError, UnsupportedError
from .groups import GroupSpec, parse_group_spec
from .parity import canonical_parity, check_parity
from .predictors import (
    biased_to_signal_biased,
    parity_to_biased,
    parity_to_signal_biased,
    parity_to_starter_biased,
    signal_biased_to_biased,
    signal_biased_to_parity,
    starter_biased_to_parity,
)
from .protocols import PROTOCOLS, run_one_by_one, run_one_in_advance, run_simultaneous
from .verdict import DEFAULT_BUDGET, Verdict
from .verify import (
    Z2,
    check_biased,
    check_signal_biased,
    check_signaling_implies_signal_biased,
    check_starter_biased,
    equivalence_suite,
    table_space,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

SUITES = ("equivalence", "parity", "signaling-proposition", "all")
FLAVORS = ("parity", "biased", "signal-biased", "starter-biased")

# The six constructive edges plus the closed-form parity -> biased shortcut.
EDGES = {
    ("biased", "signal-biased"): lambda obj, n, s: biased_to_signal_biased(obj, s),
    ("signal-biased", "biased"): lambda obj, n, s: signal_biased_to_biased(obj),
    ("signal-biased", "parity"): lambda obj, n, s: signal_biased_to_parity(obj),
    ("parity", "signal-biased"): lambda obj, n, s: parity_to_signal_biased(obj, s, n),
    ("starter-biased", "parity"): lambda obj, n, s: starter_biased_to_parity(obj),
    ("parity", "starter-biased"): lambda obj, n, s: parity_to_starter_biased(obj, n),
    ("parity", "biased"): lambda obj, n, s: parity_to_biased(obj, n),
}


class UsageError(Exception):
    pass


def _group(text: str) -> GroupSpec:
    try:
        return parse_group_spec(text)
    except GroupSpecParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hatpuzzle",
        description="Simulate, transform and exhaustively verify group-valued hat puzzles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, agents_default: Optional[int]) -> None:
        p.add_argument("--group", type=_group, required=True, help="color group, e.g. z2, z3, z2xz2, int")
        p.add_argument("--agents", type=_non_negative, default=agents_default, help="number of indexed agents")
        p.add_argument("--signaler", type=_non_negative, default=0, help="signaler index (default 0)")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        p.add_argument("--workers", type=_positive, default=1, help="worker processes for exhaustive checks")
        p.add_argument("--budget", type=_positive, default=None, help="ceiling on elementary checks (default 10^7)")

    verify = sub.add_parser("verify", help="run exhaustive verification suites")
    common(verify, 3)
    verify.add_argument("--suite", choices=SUITES, default="equivalence")

    run = sub.add_parser("run", help="simulate one protocol run with the canonical-parity predictor")
    common(run, None)
    run.add_argument("--protocol", choices=PROTOCOLS, required=True)
    run.add_argument("--coloring", required=True, help="JSON array of colors, e.g. [1,0,1]")

    transform = sub.add_parser("transform", help="apply one transformation and check its result")
    common(transform, 3)
    transform.add_argument("--from", dest="source", choices=FLAVORS, required=True)
    transform.add_argument("--to", dest="target", choices=FLAVORS, required=True)
    return parser


def _collect_timing(verdict: Verdict, prefix: str, out: dict) -> None:
    name = f"{prefix}{verdict.stage or 'verdict'}"
    if verdict.elapsed_ms is not None:
        out[name] = round(verdict.elapsed_ms, 3)
    for stage in verdict.stages:
        _collect_timing(stage, f"{name}/", out)


def _document(command: str, config: dict, verdicts: Sequence[Verdict], extra: Optional[dict] = None) -> dict:
    timing: dict[str, float] = {}
    for v in verdicts:
        _collect_timing(v, "", timing)
    doc: dict[str, Any] = {
        "tool": "hatpuzzle",
        "version": __version__,
        "command": command,
        "config": config,
        "pass": all(v.passed for v in verdicts),
        "verdicts": [v.to_json() for v in verdicts],
        "timing_ms": timing,
    }
    if extra:
        doc.update(extra)
    return doc


def dump_report(doc: dict) -> str:
    """Deterministic serialization: sorted keys, fixed indentation."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(doc: dict, path: Optional[str]) -> None:
    text = dump_report(doc)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args: argparse.Namespace, **extra) -> dict:
    config = {"group": str(args.group), "agents": args.agents, "signaler": args.signaler}
    config.update(extra)
    return config


def _proposition_skip_reason(g: GroupSpec, n: int, s: int, budget: Optional[int]) -> Optional[str]:
    if g != Z2:
        return "the signaling proposition is defined for --group z2 only"
    if not s < n:
        return "needs --signaler below --agents"
    required = table_space(n, s)["total"]
    if required > (DEFAULT_BUDGET if budget is None else budget):
        return f"{required} table predictors exceed the budget"
    return None


def cmd_verify(args: argparse.Namespace) -> int:
    g, n, s = args.group, args.agents, args.signaler
    opts = {"workers": args.workers, "budget": args.budget}
    suites = ["equivalence", "parity", "signaling-proposition"] if args.suite == "all" else [args.suite]
    if "equivalence" in suites and not s < n:
        raise UsageError(f"--signaler {s} must be below --agents {n}")
    verdicts: list[Verdict] = []
    skipped: dict[str, str] = {}
    for suite in suites:
        if suite == "equivalence":
            verdicts.append(equivalence_suite(g, n, s, **opts))
        elif suite == "parity":
            verdicts.append(check_parity(canonical_parity(g), g, n, **opts))
        else:
            if args.suite == "all":
                reason = _proposition_skip_reason(g, n, s, args.budget)
                if reason:
                    skipped[suite] = reason
                    continue
            if not s < n:
                raise UsageError(f"--signaler {s} must be below --agents {n}")
            verdicts.append(check_signaling_implies_signal_biased(g, n, s, **opts))
    extra = {"skipped": skipped} if skipped else None
    doc = _document("verify", _config(args, suite=args.suite), verdicts, extra)
    _emit(doc, args.report)
    return EXIT_PASS if doc["pass"] else EXIT_FAIL


def _parse_coloring(text: str, group: GroupSpec) -> tuple[Coloring, int]:
    """The coloring and the number of positions written out (trailing zeros included)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--coloring is not valid JSON: {exc}") from None
    try:
        f = Coloring.from_json(obj, group)
    except (HatPuzzleError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--coloring does not match {group}: {exc}") from None
    written = obj.get("values", []) if isinstance(obj, dict) else obj
    return f, len(written)


def cmd_run(args: argparse.Namespace) -> int:
    g = args.group
    f, written = _parse_coloring(args.coloring, g)
    n = args.agents
    if n is None:
        n = max(written, args.signaler + 1 if args.protocol == "one-in-advance" else 0, 1)
    if len(f.values) > n:
        raise UsageError(f"coloring has {len(f.values)} colors but --agents is {n}")
    p = canonical_parity(g)
    if args.protocol == "simultaneous":
        record = run_simultaneous(parity_to_biased(p, n), f)
    elif args.protocol == "one-in-advance":
        if not args.signaler < n:
            raise UsageError(f"--signaler {args.signaler} must be below the {n} agents")
        record = run_one_in_advance(parity_to_signal_biased(p, args.signaler, n), f)
    else:
        record = run_one_by_one(parity_to_starter_biased(p, n), f)
    _emit(record.to_json(), args.report)
    return EXIT_PASS


def _source(flavor: str, g: GroupSpec, n: int, s: int):
    p = canonical_parity(g)
    if flavor == "parity":
        return p
    if flavor == "biased":
        return parity_to_biased(p, n)
    if flavor == "signal-biased":
        return parity_to_signal_biased(p, s, n)
    return parity_to_starter_biased(p, n)


def cmd_transform(args: argparse.Namespace) -> int:
    edge = (args.source, args.target)
    if edge not in EDGES:
        raise UsageError(
            f"no direct transformation {args.source} -> {args.target}; "
            "compose via parity (supported: " + ", ".join(f"{a}->{b}" for a, b in EDGES) + ")"
        )
    g, n, s = args.group, args.agents, args.signaler
    if edge in (("biased", "signal-biased"), ("parity", "signal-biased")) or args.source == "signal-biased":
        if not s < n:
            raise UsageError(f"--signaler {s} must be below --agents {n}")
    result = EDGES[edge](_source(args.source, g, n, s), n, s)
    opts = {"workers": args.workers, "budget": args.budget}
    checker = {
        "parity": lambda r: check_parity(r, g, n, **opts),
        "biased": lambda r: check_biased(r, g, n, **opts),
        "signal-biased": lambda r: check_signal_biased(r, g, n, **opts),
        "starter-biased": lambda r: check_starter_biased(r, g, n, **opts),
    }[args.target]
    verdict = checker(result)
    config = _config(args, **{"from": args.source, "to": args.target})
    doc = _document("transform", config, [verdict], {"chain": result.chain})
    _emit(doc, args.report)
    return EXIT_PASS if verdict.passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "run": cmd_run, "transform": cmd_transform}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hatpuzzle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedError as exc:
        print(f"hatpuzzle: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())

import json

import pytest

from hatpuzzle.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing_ms", None)
    return doc


def test_verify_equivalence_passes(capsys):
    code, doc, _ = run(capsys, "verify", "--group", "z3", "--agents", "3", "--signaler", "0", "--suite", "equivalence")
    assert code == 0 and doc["pass"] is True
    assert doc["config"] == {"group": "z3", "agents": 3, "signaler": 0, "suite": "equivalence"}
    stages = [s["stage"] for s in doc["verdicts"][0]["stages"]]
    assert "starter-biased->parity" in stages
    assert all(key.startswith("equivalence") for key in doc["timing_ms"])


def test_verify_infinite_group_is_unsupported(capsys):
    code, doc, err = run(capsys, "verify", "--group", "int", "--agents", "3", "--suite", "equivalence")
    assert code == 3 and doc is None and "unsupported" in err


def test_verify_signaling_proposition(capsys):
    code, doc, _ = run(capsys, "verify", "--group", "z2", "--agents", "2", "--suite", "signaling-proposition")
    assert code == 0
    assert doc["verdicts"][0]["details"]["predictors"] == 64


def test_verify_all_skips_inapplicable_proposition(capsys):
    code, doc, _ = run(capsys, "verify", "--group", "z3", "--agents", "2", "--suite", "all")
    assert code == 0 and "signaling-proposition" in doc["skipped"]
    assert [v["stage"] for v in doc["verdicts"]] == ["equivalence", "parity"]


def test_verify_budget_exceeded(capsys):
    code, _, err = run(capsys, "verify", "--group", "z3", "--agents", "4", "--suite", "parity", "--budget", "10")
    assert code == 3 and "--budget" in err


def test_run_one_by_one(capsys):
    code, doc, _ = run(capsys, "run", "--group", "z2", "--protocol", "one-by-one", "--coloring", "[1,0,1]")
    assert code == 0
    assert doc["declarations"] == [["t", 0], [0, 1], [1, 0], [2, 1]]
    assert doc["correct"] == ["exempt", True, True, True]


def test_run_simultaneous(capsys):
    code, doc, _ = run(capsys, "run", "--group", "z3", "--protocol", "simultaneous", "--coloring", "[1,2,0]")
    assert code == 0 and doc["correct"] == [True, True, True] and doc["bias"] == 0
    assert doc["coloring"] == [1, 2, 0]


def test_run_empty_one_in_advance(capsys):
    code, doc, _ = run(capsys, "run", "--group", "z2", "--protocol", "one-in-advance", "--coloring", "[]")
    assert code == 0
    assert doc["declarations"] == [[0, 0]] and doc["correct"] == ["exempt"]


def test_run_product_group(capsys):
    code, doc, _ = run(capsys, "run", "--group", "z2xz3", "--protocol", "one-in-advance", "--agents", "3",
                       "--signaler", "1", "--coloring", "[[1,2],[0,1]]")
    assert code == 0 and doc["correct"] == ["exempt", True, True]
    assert [a for a, _ in doc["declarations"]] == [1, 0, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--group", "z2", "--protocol", "simultaneous", "--coloring", "[1,2]"],
        ["run", "--group", "z2", "--protocol", "simultaneous", "--coloring", "not json"],
        ["run", "--group", "z2", "--protocol", "simultaneous", "--coloring", "[1,1,1]", "--agents", "2"],
        ["verify", "--group", "z0"],
        ["verify", "--group", "z2", "--suite", "nonsense"],
        ["verify", "--group", "z2", "--agents", "2", "--signaler", "2"],
        ["transform", "--from", "biased", "--to", "starter-biased", "--group", "z2"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code = main(argv)
    capsys.readouterr()
    assert code == 2


def test_non_edge_message(capsys):
    code, _, err = run(capsys, "transform", "--from", "biased", "--to", "starter-biased", "--group", "z2")
    assert code == 2 and "compose via parity" in err


def test_transform_parity_to_starter(capsys):
    code, doc, _ = run(capsys, "transform", "--from", "parity", "--to", "starter-biased", "--group", "z2", "--agents", "4")
    assert code == 0 and doc["chain"] == "canonical-parity -> starter-biased"
    assert doc["verdicts"][0]["checks"] == 16 * 4 * (1 + 4)


def test_transform_signal_to_parity(capsys):
    code, doc, _ = run(capsys, "transform", "--from", "signal-biased", "--to", "parity", "--group", "z2xz2",
                       "--agents", "3", "--signaler", "1")
    assert code == 0 and doc["pass"] is True
    assert doc["chain"] == "canonical-parity -> signal-biased(s=1) -> parity"


@pytest.mark.parametrize(
    "source, target",
    [("biased", "signal-biased"), ("signal-biased", "biased"), ("starter-biased", "parity"),
     ("parity", "signal-biased"), ("parity", "biased")],
)
def test_every_edge_passes(capsys, source, target):
    code, doc, _ = run(capsys, "transform", "--from", source, "--to", target, "--group", "z3", "--agents", "3")
    assert code == 0 and doc["pass"]


def test_failure_exit_code(capsys, monkeypatch):
    import hatpuzzle.cli as cli
    from hatpuzzle.parity import ParityFunction

    monkeypatch.setattr(cli, "canonical_parity", lambda g: ParityFunction(g, lambda f: g.zero()))
    code, doc, _ = run(capsys, "verify", "--group", "z2", "--agents", "2", "--suite", "parity")
    assert code == 1 and doc["pass"] is False
    assert doc["verdicts"][0]["counterexample"]["position"] == 0


def test_report_file_and_determinism(tmp_path, capsys):
    docs = []
    for i, workers in enumerate(("1", "2", "1")):
        path = tmp_path / f"report{i}.json"
        code = main(["verify", "--group", "z2xz2", "--agents", "2", "--suite", "all", "--report", str(path),
                     "--workers", workers])
        assert code == 0
        assert capsys.readouterr().out == ""
        docs.append(json.loads(path.read_text(encoding="utf-8")))
    stripped = [json.dumps(strip_timing(d), sort_keys=True) for d in docs]
    assert stripped[0] == stripped[2]
    assert json.dumps(strip_timing(docs[1]), sort_keys=True) == stripped[0]

"""CLI surface: exit codes, JSON output, determinism."""

import json

import pytest

from welfarist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def chain_file(tmp_path, capsys):
    path = tmp_path / "chain.json"
    code, out, _ = run(capsys, "construct", "chain", "4")
    assert code == 0
    path.write_text(out)
    return str(path)


def test_construct_chain_document(capsys):
    code, out, _ = run(capsys, "construct", "chain", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["agents"] == 4
    assert doc["utilities"][0] == ["4", "0", "0", "0"]


def test_solve_log_unique_diagonal(chain_file, capsys):
    code, out, _ = run(capsys, "solve", chain_file, "--welfare", "log", "--all")
    assert code == 0
    doc = json.loads(out)
    assert doc["allocations"] == [[[0], [1], [2], [3]]]
    assert doc["welfare"] == {"kind": "log", "argument": "4"}


def test_solve_harmonic_includes_shift(chain_file, capsys):
    code, out, _ = run(capsys, "solve", chain_file, "--welfare", "harmonic:0", "--all")
    assert code == 0
    doc = json.loads(out)
    assert [[0], [], [1], [2, 3]] in doc["allocations"]


def test_solve_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _out, err = run(capsys, "solve", str(bad), "--welfare", "log")
    assert code == 2 and "error" in err


def test_check_exit_codes(chain_file, tmp_path, capsys):
    good = tmp_path / "b.json"
    good.write_text('{"bundles":[[0],[],[1],[2,3]]}')
    code, out, _ = run(capsys, "check", "ef1", chain_file, str(good))
    assert code == 0 and json.loads(out)["holds"]

    code, out, _ = run(capsys, "check", "po", chain_file, str(good))
    assert code == 0 and json.loads(out)["verdict"] == "PO"

    concentrated = tmp_path / "c.json"
    concentrated.write_text('{"bundles":[[0,1,2,3],[],[],[]]}')
    code, out, _ = run(capsys, "check", "ef1", chain_file, str(concentrated))
    assert code == 1 and not json.loads(out)["holds"]

    broken = tmp_path / "broken.json"
    broken.write_text('{"bundles":[[0],[1],[2],[2,3]]}')
    code, _out, _err = run(capsys, "check", "ef1", chain_file, str(broken))
    assert code == 2

    missing = tmp_path / "missing.json"
    missing.write_text('{"bundles":[[0],[1],[2],[]]}')
    code, _out, _err = run(capsys, "check", "ef1", chain_file, str(missing))
    assert code == 2


def test_classify_output(chain_file, capsys):
    code, out, _ = run(capsys, "classify", chain_file)
    assert code == 0
    doc = json.loads(out)
    assert doc["integer_valued"] and not doc["two_value"]


def test_condition_exit_codes(capsys):
    code, out, _ = run(
        capsys, "condition", "C3b", "--welfare", "modlog:2", "--k-max", "3", "--a-max", "5"
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["witness"]["k"] == 0 and doc["witness"]["a"] >= 2

    code, out, _ = run(
        capsys, "condition", "C4", "--welfare", "pmean:1/2", "--k-max", "100"
    )
    assert code == 0 and json.loads(out)["verdict"] == "NoViolationFound"

    code, out, _ = run(
        capsys,
        "condition",
        "C6a",
        "--welfare",
        "harmonic:-3/4",
        "--adaptive",
        "--k-max",
        "4",
        "--a-max",
        "8",
    )
    assert code == 1 and json.loads(out)["witness"] == {"k": 1, "a": 1, "b": 7}


def test_condition_usage_error(capsys):
    code, _out, err = run(capsys, "condition", "C9", "--welfare", "log")
    assert code == 2 and "error" in err


def test_construct_flat_tie(capsys):
    code, out, _ = run(capsys, "construct", "flat-tie", "2", "1", "2", "--tie-allocations")
    assert code == 0
    lines = out.strip().splitlines()
    inst = json.loads(lines[0])
    assert inst["agents"] == 2 and len(inst["utilities"][0]) == 12
    ties = json.loads(lines[1])
    assert len(ties["balanced"][0]) == 6 and len(ties["lopsided"][0]) == 7


def test_construct_bad_params(capsys):
    code, _out, err = run(capsys, "construct", "chain")
    assert code == 2
    code, _out, err = run(capsys, "construct", "unknown-thing", "1")
    assert code == 2


def test_campaign_roundtrip(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "campaign",
        "--theorem",
        "harmonic-integer-fails",
        "--trials",
        "3",
        "--seed",
        "1",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and doc["counterexample"]

    # the counterexample re-feeds through solve + check and reproduces
    inst_path = tmp_path / "counter.json"
    inst_path.write_text(doc["counterexample"]["instance"])
    code, solve_out, _ = run(
        capsys, "solve", str(inst_path), "--welfare", doc["welfare"], "--all"
    )
    assert code == 0
    alloc = doc["counterexample"]["allocation"]
    assert alloc in json.loads(solve_out)["allocations"]
    alloc_path = tmp_path / "alloc.json"
    alloc_path.write_text(json.dumps({"bundles": alloc}))
    code, _out, _err = run(capsys, "check", "ef1", str(inst_path), str(alloc_path))
    assert code == 1


def test_byte_identical_reruns(capsys):
    args = ["campaign", "--theorem", "mnw-integer", "--trials", "5", "--seed", "9"]
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas")
    assert code == 0 and json.loads(out)["passed"]


def test_solve_precision_flag(chain_file, capsys):
    code, out, _ = run(
        capsys, "solve", chain_file, "--welfare", "pmean:1/2", "--precision-bits", "64"
    )
    assert code == 0
    assert json.loads(out)["exactness"] in ("Exact", "IntervalCertified")


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0

"""In-process CLI tests: goldens, exit codes, determinism."""

import json

import pytest

from loopmatsuki.cli import main
from loopmatsuki.serialize import TSV_COLUMNS


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


DIAG_T2_T = {"n": 2, "entries": [[{"2": "1"}, {}], [{}, {"1": "1"}]]}
QUAT_LOOP = {"n": 2, "entries": [[{}, {"1": "1"}], [{"1": "-1"}, {}]]}


def test_orbits_counts_and_tsv(capsys):
    rc, out, _ = run(capsys, "orbits", "--family", "unitary", "--bound", "0",
                     "--side", "eta")
    assert rc == 0
    rows = json.loads(out)
    assert len(rows) == 3
    assert {r["aut_label"] for r in rows} == {"U(2,0)", "U(1,1)", "U(0,2)"}
    rc, out, _ = run(capsys, "orbits", "--family", "unitary", "--bound", "0",
                     "--side", "eta", "--format", "tsv")
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "\t".join(TSV_COLUMNS)
    assert len(lines) == 4


def test_match_golden(capsys):
    rc, out, _ = run(capsys, "match", "--family", "unitary", "--bound", "1",
                     "--verify-samples", "20", "--seed", "7")
    assert rc == 0
    doc = json.loads(out)
    assert len(doc["pairs"]) == 4
    assert doc["total_failures"] == 0


def test_match_deterministic(tmp_path, capsys):
    argv = ["match", "--family", "split_gl", "--epsilon", "-1",
            "--bound", "1", "--verify-samples", "5", "--seed", "3"]
    outputs = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        rc = main(argv + ["--out", str(p)])
        assert rc == 0
        outputs.append(p.read_bytes())
    assert outputs[0] == outputs[1]


def test_seed_from_environment(tmp_path, capsys, monkeypatch):
    argv = ["match", "--family", "split_gl", "--bound", "1",
            "--verify-samples", "5"]
    monkeypatch.setenv("LOOPMATSUKI_SEED", "42")
    a = tmp_path / "env.json"
    assert main(argv + ["--out", str(a)]) == 0
    b = tmp_path / "flag.json"
    assert main(argv + ["--seed", "42", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_kottwitz_count(capsys):
    rc, out, _ = run(capsys, "kottwitz", "--family", "split_gl",
                     "--epsilon", "-1", "--bound", "1")
    assert rc == 0
    assert len(json.loads(out)) == 3


def test_canonicalize_theta_golden(tmp_path, capsys):
    path = write_json(tmp_path / "x.json", DIAG_T2_T)
    rc, out, _ = run(capsys, "canonicalize", "--family", "split_gl",
                     "--side", "theta", "--input", path, "--precision", "8")
    assert rc == 0
    doc = json.loads(out)
    assert doc["lambda"] == [2, 1]
    assert doc["orbit_class"]["label"] == "Sym|Sym"


def test_canonicalize_eta_golden(tmp_path, capsys):
    path = write_json(tmp_path / "x.json", QUAT_LOOP)
    rc, out, _ = run(capsys, "canonicalize", "--family", "split_gl",
                     "--epsilon", "-1", "--side", "eta", "--input", path)
    assert rc == 0
    doc = json.loads(out)
    assert doc["lambda"] == [1, 1]
    assert doc["orbit_class"]["aut_label"] == "GL1(H)"


def test_config_file_and_inner_twist(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {
        "family": "unitary", "n": 2, "epsilon": 1,
        "inner_twist": [["1", "0"], ["0", "-1"]]})
    rc, out, _ = run(capsys, "orbits", "--config", cfg, "--bound", "0",
                     "--side", "eta")
    assert rc == 0
    assert len(json.loads(out)) == 3


def test_exit_codes(tmp_path, capsys):
    # 2: invalid input (missing datum flags)
    rc, _, err = run(capsys, "orbits")
    assert rc == 2
    # 2: tsv outside orbit tables
    rc, _, err = run(capsys, "kottwitz", "--family", "split_gl",
                     "--format", "tsv")
    assert rc == 2
    # 2: malformed JSON
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc, _, err = run(capsys, "canonicalize", "--family", "split_gl",
                     "--side", "eta", "--input", str(bad))
    assert rc == 2
    # 2: missing file
    rc, _, err = run(capsys, "canonicalize", "--family", "split_gl",
                     "--side", "eta", "--input", str(tmp_path / "none.json"))
    assert rc == 2
    # 3: unsupported family via config
    cfg = write_json(tmp_path / "cfg.json",
                     {"family": "symplectic", "n": 2, "epsilon": 1})
    rc, _, err = run(capsys, "orbits", "--config", cfg)
    assert rc == 3
    # 4: precision floor
    path = write_json(tmp_path / "x.json", DIAG_T2_T)
    rc, _, err = run(capsys, "canonicalize", "--family", "split_gl",
                     "--side", "theta", "--input", path, "--precision", "4")
    assert rc == 4
    # 5: not anti-fixed
    path = write_json(tmp_path / "y.json",
                      {"n": 2, "entries": [[{"1": "1"}, {}], [{}, {"0": "1"}]]})
    rc, _, err = run(capsys, "canonicalize", "--family", "split_gl",
                     "--epsilon", "-1", "--side", "eta", "--input", path)
    assert rc == 5


def test_bundle_enumeration(capsys):
    rc, out, _ = run(capsys, "bundle", "--family", "split_gl",
                     "--epsilon", "-1", "--bound", "1")
    assert rc == 0
    docs = json.loads(out)
    assert {d["aut_label"] for d in docs} >= {"GL2(R)", "GL1(H)"}


def test_selftest_passes(capsys):
    rc, out, _ = run(capsys, "selftest")
    assert rc == 0
    results = json.loads(out)
    assert all(r["ok"] for r in results)
    assert len(results) == 10

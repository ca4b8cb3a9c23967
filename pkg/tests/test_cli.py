"""Command-line interface: commands, exit codes, determinism.

Every test drives `main(argv)` in-process and reads stdout through capsys;
one smoke test at the end exercises the installed console script.
"""

import json
import subprocess
import sys
from importlib import resources

import pytest

import roofext.cli as cli
from roofext.cli import main


def run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line]


# -- ext ----------------------------------------------------------------------


def test_ext_text_table(capsys):
    rc, out = run(capsys, ["ext", "fixture:kx3_simple", "fixture:kx3_simple"])
    assert rc == 0
    assert "Ext^0: dim 1" in out
    assert "Ext^1: dim 1" in out
    assert "Ext^2: dim 1" in out


def test_ext_json_dims(capsys):
    rc, out = run(capsys, ["ext", "fixture:ka3_simple1", "fixture:ka3_simple3",
                           "--degree", "0", "1", "2", "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["command"] == "ext"
    # no arrows from vertex 1 to 3, but a length-two path of extensions
    assert doc["dims"] == {"0": "0", "1": "0", "2": "1"} or \
        doc["dims"] == {"0": 0, "1": 0, "2": 1}


def test_ext_mixed_algebras_is_semantic_error(capsys):
    rc, _ = run(capsys, ["ext", "fixture:kx3_simple", "fixture:ka3_simple1"])
    assert rc == 3


def test_ext_truncation_too_small(capsys):
    rc, _ = run(capsys, ["ext", "fixture:kx3_simple", "fixture:kx3_simple",
                         "--degree", "2", "--truncate", "1"])
    assert rc == 3


# -- yoneda and roof ------------------------------------------------------------


def test_yoneda_nonzero_control(capsys):
    rc, out = run(capsys, ["yoneda", "fixture:ka3_ses_12", "fixture:ka3_ses_23",
                           "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["product"]["trivial"] is False
    assert doc["splice_matches_product"] is True
    assert doc["degrees"] == {"first": 1, "second": 1, "product": 2}


def test_yoneda_reversed_order_is_semantic_error(capsys):
    rc, _ = run(capsys, ["yoneda", "fixture:ka3_ses_23", "fixture:ka3_ses_12"])
    assert rc == 3


def test_roof_showcase_vanishes(capsys):
    rc, out = run(capsys, ["roof", "fixture:kx3_ses_top", "fixture:kx3_ses_bottom",
                           "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["composite_class"]["trivial"] is True
    assert doc["matches_yoneda_product"] is True


def test_roof_text_output(capsys):
    rc, out = run(capsys, ["roof", "fixture:kx3_ses_top", "fixture:kx3_ses_bottom"])
    assert rc == 0
    assert "agrees with the cocycle-route product: True" in out


# -- lemma-check ------------------------------------------------------------------


def test_lemma_check_fixture(capsys):
    rc, out = run(capsys, ["lemma-check", "--filtration", "fixture:kx3_filtration"])
    assert rc == 0
    header, line = json_lines(out)
    assert header["source"] == "fixture:kx3_filtration"
    assert line["alpha1_trivial"] is False
    assert line["alpha2_trivial"] is False
    assert line["alpha_trivial"] is True
    assert line["ext_dims"] == {"bottom": 1, "top": 1, "composite": 1}
    assert line["dims"] == {"ambient": 3, "f1": 1, "f2": 2}


def test_lemma_check_random_deterministic(capsys):
    argv = ["lemma-check", "--random", "0xBEEF", "3", "--field", "f2"]
    rc1, out1 = run(capsys, argv)
    rc2, out2 = run(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
    lines = json_lines(out1)
    assert lines[0]["seed"] == "0xbeef"
    assert lines[0]["count"] == 3
    assert len(lines) == 4
    assert all(line["alpha_trivial"] for line in lines[1:])


def test_lemma_check_json_flag_is_a_no_op(capsys):
    # the command always emits canonical JSON lines
    _, plain = run(capsys, ["lemma-check", "--filtration", "fixture:kx3_filtration"])
    _, flagged = run(capsys, ["lemma-check", "--filtration", "fixture:kx3_filtration",
                              "--json"])
    assert plain == flagged


def test_lemma_check_failure_exit_code(capsys, monkeypatch):
    real = cli.filtration_two_class

    def doctored(filt):
        a1, a2, alpha, report = real(filt)
        fake = dict(report)
        fake["composite_class"] = {"trivial": False, "coords": ["1"]}
        return a1, a2, alpha, fake

    monkeypatch.setattr(cli, "filtration_two_class", doctored)
    rc, out = run(capsys, ["lemma-check", "--filtration", "fixture:kx3_filtration"])
    assert rc == 1
    assert json_lines(out)[1]["alpha_trivial"] is False


def test_lemma_check_degenerate_filtration(capsys, tmp_path):
    doc = json.loads(resources.files("roofext")
                     .joinpath("fixtures", "kx3_filtration.json").read_text())
    doc["f1"] = doc["f2"]
    path = tmp_path / "degen.json"
    path.write_text(json.dumps(doc))
    rc, _ = run(capsys, ["lemma-check", "--filtration", str(path)])
    assert rc == 4


@pytest.mark.parametrize("argv", [
    ["lemma-check", "--random", "abc"],
    ["lemma-check", "--random", "zz", "1"],
    ["lemma-check", "--count", "0"],
    ["lemma-check", "--filtration", "fixture:kx3_filtration", "--random"],
    ["lemma-check", "--filtration", "/tmp/never-exists-anywhere.json"],
    ["ext", "fixture:nope", "fixture:kx3_simple"],
], ids=["one-random-arg", "bad-seed", "zero-count", "both-sources",
        "missing-file", "missing-fixture"])
def test_schema_errors_exit_2(capsys, argv):
    rc, _ = run(capsys, argv)
    assert rc == 2


# -- projcoh ----------------------------------------------------------------------


def test_projcoh_single_table_json(capsys):
    rc, out = run(capsys, ["projcoh", "P1xP1", "O(-6,-6)", "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["table"]["2"]["dim"] == 25
    assert doc["table"]["0"]["dim"] == 0
    assert doc["chi"] == 25


def test_projcoh_text_format(capsys):
    rc, out = run(capsys, ["projcoh", "P3", "Omega^1(-5)"])
    assert rc == 0
    assert "h^3 = 36" in out
    rc, out = run(capsys, ["projcoh", "P3", "O(-2)"])
    assert rc == 0
    assert "all cohomology vanishes" in out


def test_projcoh_normalizes_expressions(capsys):
    rc, out = run(capsys, ["projcoh", "P2", "dual(O(1)*O(2))", "--json"])
    assert rc == 0
    assert json.loads(out)["normal_form"] == "O(-3)"


def test_projcoh_batch_fixture(capsys):
    rc, out = run(capsys, ["projcoh", "--batch", "fixture:prop2_descriptors",
                           "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["command"] == "projcoh"
    sheaves = [t["sheaf"] for t in doc["tables"]]
    assert "O(-6,-6)" in sheaves and "Omega^1(-5)" in sheaves


@pytest.mark.parametrize("argv", [
    ["projcoh", "Q2", "O(1)"],
    ["projcoh", "P2", "dual(Omega^1)"],
    ["projcoh", "P2", "O(("],
    ["projcoh", "P1xP1", "Omega^1"],
    ["projcoh", "P2"],
], ids=["bad-space", "dual-of-rank-2", "bad-syntax", "omega-on-product",
        "missing-sheaf"])
def test_projcoh_schema_errors(capsys, argv):
    rc, _ = run(capsys, argv)
    assert rc == 2


# -- prop2-report -----------------------------------------------------------------


def test_prop2_report_json_deterministic(capsys):
    rc1, out1 = run(capsys, ["prop2-report", "--json"])
    rc2, out2 = run(capsys, ["prop2-report", "--json"])
    assert rc1 == rc2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["summary"]["chain1_mismatches"] == 2


def test_prop2_report_text_flags_mismatches(capsys):
    rc, out = run(capsys, ["prop2-report"])
    assert rc == 0
    assert out.count("<-- MISMATCH") == 2
    assert "verdict:" in out


# -- output plumbing --------------------------------------------------------------


def test_out_flag_writes_same_bytes(capsys, tmp_path):
    path = tmp_path / "table.json"
    rc, _ = run(capsys, ["projcoh", "P3", "O(3)", "--json", "--out", str(path)])
    assert rc == 0
    rc, out = run(capsys, ["projcoh", "P3", "O(3)", "--json"])
    assert path.read_text() == out


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "roofext.cli", "projcoh", "P3", "O(-2)", "--json"],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["chi"] == 0

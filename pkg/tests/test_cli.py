"""Command-line interface, exercised through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from lamclock.cli import main


@pytest.fixture()
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args))

    return go


# -- tree commands -----------------------------------------------------------


def test_bt_text(run):
    res = run("bt", "Y0 f", "--depth", "4")
    assert res.exit_code == 0
    assert res.output == "[2] f\n  [1] f\n    ↺ up 1 (phase 2, period 2)\n"


def test_bt_atomic(run):
    res = run("bt", "eta eta delta x", "--atomic", "--depth", "3")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "⟨11,1,1,e⟩ x"


def test_bt_json_shape_and_determinism(run):
    a = run("bt", "Y1 f", "--json")
    b = run("bt", "Y1 f", "--json")
    assert a.exit_code == 0
    assert a.output == b.output
    d = json.loads(a.output)
    assert sorted(d) == ["atomic", "closed", "depth", "fuel", "periodicity", "root", "semantics"]
    assert d["closed"] is True
    assert d["semantics"] == "bt"
    assert d["periodicity"]["loops"] == [
        {"at": "2", "delta": 1, "period": "2", "phase": "e"}
    ]


def test_bt_dot(run):
    res = run("bt", "Y1 f", "--dot")
    assert res.exit_code == 0
    assert res.output.startswith("digraph clocktree {")
    assert 'n0 [label="[2] f"];' in res.output
    assert 'n0 -> n0 [style=dashed, label="(e, 2)"];' in res.output


def test_llt_whnf_layers(run):
    res = run("llt", r"(\x y. x x)(\x y. x x)")
    assert res.exit_code == 0
    assert res.output == "[1] λy\n  ↺ up 1 (phase e, period 0)\n"


def test_bet_keeps_stuck_application(run):
    res = run("bet", r"x ((\x. x x)(\x. x x))")
    assert res.exit_code == 0
    assert res.output == "[0] @\n  [0] x\n  ⊥\n"


def test_closed_only_failure(run):
    res = run("bt", r"Y0 (\g x. f (g (x x)))",
              "--depth", "4", "--fuel", "300", "--closed-only")
    assert res.exit_code == 3


def test_parse_error_is_usage_error(run):
    res = run("bt", "(((")
    assert res.exit_code == 2
    assert "cannot parse" in res.output


def test_defs_file(run, tmp_path):
    f = tmp_path / "defs.txt"
    f.write_text("W = \\x. x x x;\n")
    res = run("bt", "W w", "--defs", str(f), "--depth", "3")
    assert res.exit_code == 0
    assert res.output == "[1] w\n  [0] w\n  [0] w\n"


def test_defs_file_syntax_error(run, tmp_path):
    f = tmp_path / "defs.txt"
    f.write_text("W = \\x. x x x\n")  # missing terminator
    res = run("bt", "W", "--defs", str(f))
    assert res.exit_code == 2


# -- compare -----------------------------------------------------------------


def test_compare_separates(run):
    res = run("compare", "Y0", "Y1")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "inconvertible (simple-eventual-mismatch)"
    assert "  level: 2" in lines
    assert "  relation: eq" in lines


def test_compare_atomic_flag(run):
    res = run("compare", "eta eta delta", "Y0 (S S) I", "--atomic")
    assert res.exit_code == 0
    assert "relation: list_eq" in res.output


def test_compare_inconclusive_exit_code(run):
    res = run("compare", "Y0", "Y0")
    assert res.exit_code == 1
    assert res.output.splitlines()[0] == "inconclusive (none)"


def test_compare_json(run):
    res = run("compare", "Y0", "Y1", "--json")
    assert res.exit_code == 0
    d = json.loads(res.output)
    assert d["conclusion"] == "inconvertible"
    assert d["justification"] == "simple-eventual-mismatch"


# -- catalog -----------------------------------------------------------------


def test_catalog_listing(run):
    res = run("catalog")
    assert res.exit_code == 0
    names = res.output.split()
    assert "y0" in names and "bohm-seq" in names


def test_catalog_instantiation(run):
    res = run("catalog", "bohm-seq", "2")
    assert res.exit_code == 0
    assert res.output.strip() == r"(\a b.b (a a b)) (\a b.b (a a b)) (\a b.b (a b))"


def test_catalog_unknown_name(run):
    res = run("catalog", "nope")
    assert res.exit_code == 2


# -- check-simple ------------------------------------------------------------


def test_check_simple_positive(run):
    res = run("check-simple", "eta eta delta x")
    assert res.exit_code == 0
    assert res.output == "simple\n"


def test_check_simple_negative_with_witness(run):
    res = run("check-simple", "delta delta (delta delta)", "--depth", "4", "--fuel", "200")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "not_simple"
    assert "duplicating" in res.output


def test_check_simple_unknown_exit_code(run):
    res = run("check-simple", r"Y1 (\g x. f (g (x x)))", "--depth", "4", "--fuel", "300")
    assert res.exit_code == 3
    assert res.output.splitlines()[0] == "unknown"


# -- repro -------------------------------------------------------------------


ALL_IDS = [
    "fig3", "ex4-19", "ex4-20", "fig4", "lemma5-3", "fig7", "fig8",
    "sec7-atomic", "ex7-4", "ex8-3", "thm3-8",
]


def test_repro_list(run):
    res = run("repro", "--list")
    assert res.exit_code == 0
    assert res.output.split() == ALL_IDS


def test_repro_all_pass(run):
    res = run("repro")
    assert res.exit_code == 0
    assert res.output.splitlines() == [f"{i}: PASS" for i in ALL_IDS]


def test_repro_single(run):
    res = run("repro", "fig3")
    assert res.exit_code == 0
    assert res.output == "fig3: PASS\n"


def test_repro_unknown_id(run):
    res = run("repro", "nope")
    assert res.exit_code == 2

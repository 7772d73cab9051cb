import io
import json
import subprocess
import sys

import pytest

from cnd.cli import main
from cnd.deduction import Leaf, check
from cnd.logic import Atom
from cnd.syntax import parse_deduction, render
from conftest import load_fixture


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_valid_fixture(capsys):
    code, out, err = run(capsys, "check", "derived_imp_intro.cnd")
    assert code == 0 and err == ""
    assert out == "derived_imp_intro.cnd: valid in cex: ¬A ⊢ A ⊃ B\n"


def test_check_invalid_reports_position(capsys, monkeypatch):
    monkeypatch.setenv("CND_COLOR", "0")
    code, out, err = run(capsys, "check", "forall_broken_reduct", "--system", "cexall")
    assert code == 1 and out == ""
    assert "forall_broken_reduct:6:8: error: " in err
    assert "eigenparameter a occurs in open assumption" in err and "(at /1/1)" in err


def test_check_parse_error(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CND_COLOR", "0")
    f = tmp_path / "bad.cnd"
    f.write_text("(andE (assume 1 (and (at A) (at B)))\n  (assume x (at A)))\n")
    code, _, err = run(capsys, "check", str(f))
    assert code == 1
    assert err == "%s:2:11: error: expected a positive integer label\n" % f


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.cnd")
    assert code == 1 and "error" in err


def test_check_several_files_keeps_worst_code(capsys):
    code, out, _ = run(capsys, "check", "imp_refl", "forall_example", "--system", "c")
    assert code == 1 and out.startswith("imp_refl: valid in c: ⊢ ")


def test_color_switch(capsys, monkeypatch):
    monkeypatch.setenv("CND_COLOR", "1")
    _, _, err = run(capsys, "check", "/nonexistent/x.cnd")
    assert "\033[31merror\033[0m" in err
    monkeypatch.setenv("CND_COLOR", "0")
    _, _, err = run(capsys, "check", "/nonexistent/x.cnd")
    assert "\033[" not in err


def test_normalize_and_detour_gives_leaf(capsys):
    code, out, _ = run(capsys, "normalize", "and_detour.cnd", "--trace")
    assert code == 0
    lines = out.splitlines()
    assert lines == ["1 DetourAnd 2/0 <1,1> -> <0,0>", "(assume 1 (at A))"]


def test_normalize_refuses_forall(capsys):
    code, out, err = run(capsys, "normalize", "forall_example.cnd", "--system", "cexall")
    assert code == 2 and out == "" and "∀" in err


def test_normalize_budget(capsys):
    code, _, err = run(capsys, "normalize", "worked1_pre", "--max-steps", "0")
    assert code == 3 and "error" in err


def test_normalize_out_file(capsys, tmp_path):
    target = tmp_path / "nf.cnd"
    code, out, _ = run(capsys, "normalize", "worked2_pre", "--out", str(target))
    assert code == 0 and out == ""
    nf = parse_deduction(target.read_text())
    assert check(nf, "cex").valid


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "or_perm", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1 and rep["file"] == "or_perm"
    assert rep["rank"] == [1, 2] and rep["normal"] is False
    assert set(rep) >= {"maximal_formulas", "maximal_segments", "branches", "subformula_violations"}


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "imp_refl")
    assert code == 0
    assert out.splitlines()[0] == "rank <0,0>  (normal)"
    assert out.rstrip().endswith("subformula audit: ok")


def test_render_formats(capsys):
    _, out, _ = run(capsys, "render", "and_detour", "--format", "sexpr")
    assert out == render(load_fixture("and_detour"))
    _, out, _ = run(capsys, "render", "and_detour", "--format", "latex")
    assert out.startswith("\\begin{prooftree}")
    _, out, _ = run(capsys, "render", "and_detour")
    assert "by andI" in out


def test_translate_both_ways(capsys, tmp_path):
    code, out, _ = run(capsys, "translate", "derived_imp_intro", "--to", "conventional")
    assert code == 0 and out.startswith("(cImpI ")
    conv = tmp_path / "conv.cnd"
    conv.write_text(out)
    code, back, _ = run(capsys, "translate", str(conv), "--to", "general")
    assert code == 0
    assert parse_deduction(back).conclusion == load_fixture("derived_imp_intro").conclusion


def test_gen_is_deterministic_and_valid(capsys):
    _, a, _ = run(capsys, "gen", "--seed", "5", "--size", "30", "--count", "4", "--system", "c")
    _, b, _ = run(capsys, "gen", "--seed", "5", "--size", "30", "--count", "4", "--system", "c")
    assert a == b
    trees = [parse_deduction(line) for line in a.splitlines()]
    assert len(trees) == 4 and all(check(t, "c").valid for t in trees)


def test_gen_size_one(capsys):
    _, out, _ = run(capsys, "gen", "--size", "1")
    assert isinstance(parse_deduction(out), Leaf)


def test_gen_conventional(capsys):
    _, out, _ = run(capsys, "gen", "--seed", "3", "--conventional")
    assert check(parse_deduction(out), "cex", conventional=True).valid


def test_gen_rejects_bad_size(capsys):
    with pytest.raises(SystemExit) as e:
        main(["gen", "--size", "0"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv", [
    ["normalize", "worked1_pre", "--trace"],
    ["analyze", "worked2_pre", "--json"],
    ["render", "or_expansion_post", "--format", "ascii"],
])
def test_byte_identical_repeats(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)


def test_stdin_input(capsys, monkeypatch):
    data = render(Leaf(4, Atom("A"))).encode()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    code, out, _ = run(capsys, "check", "-")
    assert code == 0 and out == "-: valid in cex: A ⊢ A\n"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cnd.cli", "check", "imp_refl"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "valid" in r.stdout

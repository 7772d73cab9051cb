import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnd.deduction import Leaf, Node
from cnd.generator import gen_deduction
from cnd.logic import Atom, Exists, Fn, Imp, Not, Param, Var
from cnd.syntax import (
    ParseError, formula_sexpr, parse_deduction, parse_formula, parse_with_spans, render,
    render_formula,
)
from conftest import fixture_names, formulas, load_fixture


# ------------------------------------------------------------------ parsing

def test_parse_implication():
    assert parse_formula("(imp (at P) (at P))") == Imp(Atom("P"), Atom("P"))


def test_parse_leaf():
    assert parse_deduction("(assume 1 (at A))") == Leaf(1, Atom("A"))


def test_bound_names_become_variables():
    f = parse_formula("(ex x (at R x a (fn s x)))")
    assert f == Exists("x", Atom("R", (Var("x"), Param("a"), Fn("s", (Var("x"),)))))


def test_derived_imp_intro_fixture_shape():
    d = load_fixture("derived_imp_intro")
    assert isinstance(d, Node) and d.rule == "tr"
    assert d.conclusion == Imp(Atom("A"), Atom("B"))
    labs = [l for grp in d.discharges for l, _ in grp]
    assert len(labs) == len(set(labs)) == 2


def test_comments_and_whitespace_are_ignored():
    text = "; leading comment\n(assume\t7   ; inline\n (not (at A)))\n"
    assert parse_deduction(text) == Leaf(7, Not(Atom("A")))


def test_discharge_lists_are_sorted_on_input():
    a = parse_deduction("(andE (assume 1 (and (at A) (at A))) (assume 2 (at A)) (assume 3 (at A))"
                        " (dis (3 (at A)) (2 (at A))) (dis))")
    assert [l for l, _ in a.discharges[0]] == [2, 3]


@pytest.mark.parametrize("text, line, col, needle", [
    ("(imp (at P))", 1, 2, "unknown rule"),
    ("(assume 0 (at A))", 1, 9, "positive integer label"),
    ("(assume 1 (at A)) x", 1, 19, "trailing input"),
    ("(notE (assume 1 (not (at A))) (assume 2 (at A)))", 1, 1, "explicit (concl"),
    (b"(at \xff)", 1, 5, "UTF-8"),
    ("(andE (assume 1 (and (at A) (at B))) (assume 2 (at A)) (dis) (dis) (dis))", 1, 1,
     "discharge slots"),
    ("\n\n  (assume 1\n  (at A)", 3, 3, "unclosed"),
    ("(assume 1 (at A) (at B))", 1, 1, "takes 2 arguments"),
    ("", 1, 1, "end of input"),
    pytest.param("(assume 1 " + "(not " * 300 + "(at A)" + ")" * 301, 1, 1286, "nesting deeper",
                 id="deep"),
])
def test_errors_are_positioned(text, line, col, needle):
    with pytest.raises(ParseError) as ei:
        parse_deduction(text)
    e = ei.value
    assert needle in e.msg
    assert (e.span.line, e.span.col) == (line, col)
    assert e.span.begin <= e.span.end


def test_parse_formula_rejects_deduction_syntax():
    with pytest.raises(ParseError, match="unknown formula constructor"):
        parse_formula("(assume 1 (at A))")


def test_spans_cover_every_subtree():
    text = "(andE (assume 1 (and (at A) (at B)))\n      (assume 2 (at A)) (dis (2 (at A))) (dis))"
    d, spans = parse_with_spans(text)
    assert set(spans) == {(), (0,), (1,)}
    assert (spans[(1,)].line, spans[(1,)].col) == (2, 7)
    raw = text.encode()
    assert raw[spans[(0,)].begin:spans[(0,)].end] == b"(assume 1 (and (at A) (at B)))"


# ---------------------------------------------------------------- rendering

def test_leaf_sexpr():
    assert render(Leaf(1, Atom("A"))) == "(assume 1 (at A))\n"


def test_sexpr_is_canonical():
    messy = "(andE  (assume 1 (and (at A) (at B)))\n (assume 2 (at A))\t(dis (2 (at A)))\n (dis))"
    out = render(parse_deduction(messy))
    assert out == "(andE (assume 1 (and (at A) (at B))) (assume 2 (at A)) (dis (2 (at A))) (dis))\n"


def test_round_trip_on_every_fixture():
    for name in fixture_names():
        d = load_fixture(name)
        text = render(d)
        assert parse_deduction(text) == d, name
        assert render(parse_deduction(text)) == text


def test_ascii_marks_discharged_assumptions():
    out = render(load_fixture("worked1_pre"), "ascii")
    # the four classes discharged by the displayed rules
    for mark in ("[B]^1", "[E]^2", "[A]^3", "[~A]^4"):
        assert mark in out
    assert out.splitlines()[0] == "F    by notI /3,4"
    assert "A -> F^9" in out


def test_latex_markup():
    out = render(load_fixture("and_detour"), "latex")
    lines = out.splitlines()
    assert lines[0] == r"\begin{prooftree}" and lines[-1] == r"\end{prooftree}"
    assert r"\AxiomC{$[A \land B]^{3}$}" in lines
    assert r"\RightLabel{$\scriptstyle \land I_{3}$}" in lines
    assert r"\TrinaryInfC{$A$}" in lines


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown format"):
        render(Leaf(1, Atom("A")), "html")


def test_render_formula_variants():
    f = parse_formula("(imp (not (at p)) (ex x (at F x)))")
    assert render_formula(f, "sexpr") == "(imp (not (at p)) (ex x (at F x)))"
    assert render_formula(f, "unicode") == "¬p ⊃ ∃x F(x)"


# --------------------------------------------------------------- properties

@settings(max_examples=200, deadline=None)
@given(formulas())
def test_formula_round_trip(f):
    assert parse_formula(formula_sexpr(f)) == f


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["c", "cex"]))
def test_generated_round_trip(seed, system):
    d = gen_deduction(seed, 40, system)
    assert parse_deduction(render(d)) == d


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=64))
def test_parser_only_raises_parse_error(data):
    try:
        parse_deduction(data)
    except ParseError:
        pass

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from cnd.deduction import (
    RULES, Leaf, Node, canonical, check, fresh_label, fresh_param, labels, node,
    open_assumptions, open_formulas, occurrences, walk,
)
from cnd.generator import gen_deduction
from cnd.logic import And, Atom, Exists, Imp, Not, Or, Param, Var
from cnd.transform import relabel
from conftest import D, load_fixture

A, B, C = Atom("A"), Atom("B"), Atom("C")


def diag_text(rep):
    return " | ".join("%s %s" % d for d in rep.diagnostics)


# --------------------------------------------------------- fixture oracles

def test_derived_imp_intro_valid_with_pi_assumptions_open():
    d = load_fixture("derived_imp_intro")
    rep = check(d, "c")
    assert rep.valid, diag_text(rep)
    assert rep.conclusion == Imp(A, B)
    # Pi = notE(not A, [A]) leaves only not A open
    assert rep.open_assumptions == frozenset({(3, Not(A))})


def test_derived_reductio_valid():
    rep = check(load_fixture("derived_reductio"), "c")
    assert rep.valid, diag_text(rep)
    assert rep.conclusion == Not(A)


def test_classical_reductio_valid():
    rep = check(load_fixture("derived_reductio_classical"), "c")
    assert rep.valid and rep.conclusion == A


def test_imp_refl_is_closed():
    rep = check(load_fixture("imp_refl"), "c")
    assert rep.valid and rep.open_assumptions == frozenset()


def test_forall_fixture_needs_forall_system():
    d = load_fixture("forall_example")
    assert check(d, "cexall").valid
    rep = check(d, "cex")
    assert not rep.valid
    assert "allI" in diag_text(rep) or "allE" in diag_text(rep)


def test_broken_forall_reduct_rejected_at_forall_intro():
    d = load_fixture("forall_broken_reduct")
    rep = check(d, "cexall")
    assert not rep.valid
    paths = [p for p, m in rep.diagnostics if "eigenparameter" in m and "open assumption" in m]
    assert paths == [(1, 1)]
    assert d.premises[1].premises[1].rule == "allI"


# ------------------------------------------------------ local conditions

def test_not_intro_with_mismatched_discharges():
    d = D("""(notI (notE (assume 3 (not (at C))) (assume 1 (at A)) (concl (at C)))
                   (notE (assume 4 (not (at C))) (assume 2 (not (at B))) (concl (at C)))
                   (dis (1 (at A))) (dis (2 (not (at B)))))""")
    rep = check(d, "c")
    assert not rep.valid
    assert any(p == () for p, _ in rep.diagnostics), diag_text(rep)


def test_leaf_open_assumptions():
    assert open_assumptions(Leaf(1, A)) == frozenset({(1, A)})
    assert open_formulas(Leaf(1, A)) == frozenset({A})


def test_label_shared_by_distinct_formulas():
    d = D("(andI (assume 1 (at A)) (assume 2 (at B)) (assume 1 (at B)) (dis))")
    rep = check(d, "c")
    assert not rep.valid and "distinct formulas" in diag_text(rep)


def test_vacuous_discharge_above_arbitrary_premise():
    # tr whose minor class [A] has no occurrence
    d = D("""(tr (assume 5 (at C)) (impE (assume 2 (imp (at A) (at B))) (assume 6 (at A))
                 (assume 7 (at C)) (dis (7 (at C))))
              (dis) (dis (2 (imp (at A) (at B)))))""")
    rep = check(d, "c")
    assert not rep.valid and "vacuous" in diag_text(rep)


def test_conjunction_elimination_may_discharge_nothing():
    d = D("(andE (assume 1 (and (at A) (at B))) (assume 2 (at C)) (dis) (dis))")
    assert check(d, "c").valid


def test_partial_discharge_of_a_class_is_rejected():
    # [A]^1 occurs both inside and outside the subtree of the discharging rule
    d = D("""(andI (assume 1 (at A)) (assume 3 (at B))
                (andE (assume 4 (and (at A) (at B))) (assume 1 (at A)) (dis (1 (at A))) (dis))
                (dis (4 (and (at A) (at B)))))""")
    assert not check(d, "c").valid


def test_disjunction_intro_may_not_discharge_inside_its_specific_premise():
    d = D("""(orIL (notE (assume 4 (not (or (at A) (at B)))) (assume 1 (or (at A) (at B))) (concl (at A)))
                   (assume 1 (or (at A) (at B)))
                   (dis (1 (or (at A) (at B)))))""")
    assert not check(d, "c").valid


def test_conclusion_must_match_arbitrary_premise():
    good = D("(orIL (assume 1 (at A)) (assume 2 (or (at A) (at B))) (dis (2 (or (at A) (at B)))))")
    bad = Node("orIL", good.premises, Atom("Z"), good.discharges)
    assert check(good, "c").valid and not check(bad, "c").valid


def test_existential_eigen_conditions():
    ok = D("""(exE (assume 1 (ex x (at F x)))
                  (exI (assume 2 (at F a)) (assume 3 (ex x (at F x))) (dis (3 (ex x (at F x)))))
                  (dis (2 (at F a))) (eigen a))""")
    assert check(ok, "cex").valid
    in_concl = D("""(exE (assume 1 (ex x (at F x))) (assume 2 (at F a))
                      (dis (2 (at F a))) (eigen a))""")
    assert not check(in_concl, "cex").valid
    in_open = D("""(exE (assume 1 (ex x (at F x)))
                      (notE (assume 5 (not (at F a))) (assume 2 (at F a)) (concl (at C)))
                      (dis (2 (at F a))) (eigen a))""")
    rep = check(in_open, "cex")
    assert not rep.valid and "open assumption" in diag_text(rep)


def test_existential_rules_absent_from_c():
    d = D("(exI (assume 1 (at F a)) (assume 2 (ex x (at F x))) (dis (2 (ex x (at F x)))))")
    assert check(d, "cex").valid
    assert not check(d, "c").valid


def test_bottom_elimination_behind_flag_and_atomic_only():
    d = D("(botE (assume 1 (bot)) (concl (at A)))")
    assert not check(d, "c").valid
    assert check(d, "c", allow_bot=True).valid
    compound = D("(botE (assume 1 (bot)) (concl (and (at A) (at B))))")
    assert not check(compound, "c", allow_bot=True).valid


def test_conventional_rules_need_flag():
    d = D("(cAndI (assume 1 (at A)) (assume 2 (at B)))")
    assert d.conclusion == And(A, B)
    assert not check(d, "c").valid
    assert check(d, "c", conventional=True).valid


def test_unknown_system():
    rep = check(Leaf(1, A), "nope")
    assert not rep.valid and "unknown system" in diag_text(rep)


# -------------------------------------------------------------- plumbing

def test_fresh_label():
    d = D("(andE (assume 1 (and (at A) (at B))) (assume 2 (at A)) (dis (2 (at A))) (dis))")
    assert labels(d) == {1, 2}
    assert fresh_label(d) == 3
    assert fresh_label(Leaf(1, A)) == 2


def test_fresh_param():
    d = D("(andI (assume 1 (at F a)) (assume 2 (at F b)) (assume 3 (at C)) (dis))")
    assert fresh_param(d) == "c"
    assert fresh_param(Leaf(1, A)) == "a"


def test_node_constructor_defaults_conclusion():
    n = node("andE", [Leaf(1, And(A, B)), Leaf(2, A)], discharges=[[(2, A)], []])
    assert n.conclusion == A
    assert check(n, "c").valid


def test_walk_and_occurrences():
    d = load_fixture("or_perm")
    paths = [p for p, _ in walk(d)]
    assert paths[0] == () and len(paths) == len(set(paths))
    assert occurrences(d, 2) == [(0, 1)]


def test_canonical_relabels_in_order():
    d = D("(andE (assume 7 (and (at A) (at B))) (assume 9 (at A)) (dis (9 (at A))) (dis))")
    c = canonical(d)
    # discharge groups of a node are numbered before its premises
    assert c.premises[1].label == 1 and c.premises[0].label == 2
    assert canonical(c) == c


# ------------------------------------------------------------- properties

junk_rules = st.sampled_from(sorted(RULES))
junk_formulas = st.sampled_from([A, B, Not(A), And(A, B), Or(A, B), Imp(A, B),
                                 Exists("x", Atom("F", (Var("x"),))), Atom("F", (Param("a"),))])


def junk_trees():
    leaf = st.builds(Leaf, st.integers(1, 4), junk_formulas)

    def extend(inner):
        return st.builds(
            lambda r, ps, c, ds, e: Node(r, tuple(ps), c, ds, e),
            junk_rules, st.lists(inner, max_size=3), junk_formulas,
            st.lists(st.lists(st.tuples(st.integers(1, 4), junk_formulas), max_size=2).map(tuple),
                     max_size=3).map(tuple),
            st.sampled_from([None, "a", "b"]))
    return st.recursive(leaf, extend, max_leaves=10)


@settings(max_examples=300, deadline=None)
@given(junk_trees(), st.sampled_from(["c", "cex", "cexall"]))
def test_check_is_total(d, system):
    rep = check(d, system)
    assert rep.valid == (not rep.diagnostics)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["c", "cex"]), st.integers(0, 2 ** 31))
def test_relabelling_by_injection_preserves_everything(seed, system, salt):
    d = gen_deduction(seed, 30, system)
    labs = sorted(labels(d))
    targets = random.Random(salt).sample(range(1, 10 * len(labs) + 10), len(labs))
    e = relabel(d, dict(zip(labs, targets)))
    before, after = check(d, system), check(e, system)
    assert after.valid
    assert after.conclusion == before.conclusion
    assert open_formulas(e) == open_formulas(d)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["c", "cex"]))
def test_discharged_classes_live_in_their_subtree(seed, system):
    d = gen_deduction(seed, 40, system)
    for p, t in walk(d):
        if not isinstance(t, Node):
            continue
        for s, (prem, _) in enumerate(t.spec.slots):
            for l, _ in t.discharges[s]:
                for q in occurrences(d, l):
                    assert q[:len(p) + 1] == p + (prem,)

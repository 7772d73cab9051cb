"""Deductions with general introduction and elimination rules, and the checker.

A deduction is a tree of :class:`Leaf` and :class:`Node` values.  Every node
carries one discharge group per discharge slot of its rule schema; a group is
a tuple of ``(label, formula)`` pairs, one per assumption class discharged
there.  Premise order follows the usual left-to-right display of the rules.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Dict, Iterator, List, Optional, Tuple

from .logic import (
    And, Bot, Exists, Forall, Formula, Imp, Not, Or, Param,
    free_vars, instantiate, is_atomic, match_instance, params,
    pretty,
)

MAJOR, MINOR, SPECIFIC, ARBITRARY = "major", "minor", "specific", "arbitrary"


@dataclass(frozen=True)
class RuleSpec:
    name: str
    premises: tuple            # slot kind for every premise
    slots: tuple               # (premise index, role) per discharge group
    kind: str                  # "intro", "elim" or "conv" (conclusion-style intro)
    connective: Optional[type] = None
    eigen: bool = False
    free_conclusion: bool = False   # conclusion not fixed by the premises

    @property
    def arity(self):
        return len(self.premises)

    def arbitrary(self):
        return [i for i, k in enumerate(self.premises) if k == ARBITRARY]

    def major_slot(self) -> Optional[int]:
        for s, (_, role) in enumerate(self.slots):
            if role == MAJOR:
                return s
        return None


def _r(name, premises, slots, kind, conn=None, **kw):
    return RuleSpec(name, tuple(premises), tuple(slots), kind, conn, **kw)


S, A, M, N = SPECIFIC, ARBITRARY, MAJOR, MINOR
RULES: Dict[str, RuleSpec] = {r.name: r for r in [
    _r("andI", [S, S, A], [(2, M)], "intro", And),
    _r("andE", [M, A], [(1, "elim"), (1, "elim")], "elim", And),
    _r("orIL", [S, A], [(1, M)], "intro", Or),
    _r("orIR", [S, A], [(1, M)], "intro", Or),
    _r("orE", [M, A, A], [(1, "elim"), (2, "elim")], "elim", Or),
    _r("impI", [S, A], [(1, M)], "intro", Imp),
    _r("tr", [A, A], [(0, N), (1, M)], "intro", Imp),
    _r("impE", [M, N, A], [(2, "elim")], "elim", Imp),
    _r("notI", [A, A], [(0, N), (1, M)], "intro", Not),
    _r("notE", [M, N], [], "elim", Not, free_conclusion=True),
    _r("exI", [S, A], [(1, M)], "intro", Exists),
    _r("exE", [M, A], [(1, "elim")], "elim", Exists, eigen=True),
    _r("allI", [S, A], [(1, M)], "intro", Forall, eigen=True),
    _r("allE", [M, A], [(1, "elim")], "elim", Forall),
    _r("botE", [M], [], "elim", Bot, free_conclusion=True),
    # conclusion-style introductions of the conventional system
    _r("cAndI", [S, S], [], "conv", And),
    _r("cOrIL", [S], [], "conv", Or, free_conclusion=True),
    _r("cOrIR", [S], [], "conv", Or, free_conclusion=True),
    _r("cImpI", [S], [(0, N)], "conv", Imp, free_conclusion=True),
    _r("cExI", [S], [], "conv", Exists, free_conclusion=True),
]}

INTRO_RULES = frozenset(n for n, r in RULES.items() if r.kind == "intro")
ELIM_RULES = frozenset(n for n, r in RULES.items() if r.kind == "elim")
GENERAL_ONLY = frozenset({"andI", "orIL", "orIR", "impI", "exI"})
CONVENTIONAL_ONLY = frozenset({"cAndI", "cOrIL", "cOrIR", "cImpI", "cExI"})

SYSTEMS = {
    "c": frozenset({"andI", "andE", "orIL", "orIR", "orE", "impI", "tr", "impE",
                    "notI", "notE"}),
}
SYSTEMS["cex"] = SYSTEMS["c"] | {"exI", "exE"}
SYSTEMS["cexall"] = SYSTEMS["cex"] | {"allI", "allE"}


def rules_for(system: str, conventional: bool = False, allow_bot: bool = False):
    if system not in SYSTEMS:
        raise ValueError("unknown system %r (expected one of %s)" % (system, ", ".join(SYSTEMS)))
    names = set(SYSTEMS[system])
    if allow_bot:
        names.add("botE")
    if conventional:
        conv = {"andI": "cAndI", "orIL": "cOrIL", "orIR": "cOrIR", "impI": "cImpI", "exI": "cExI"}
        names = {conv.get(n, n) for n in names}
    return frozenset(names)


# ----------------------------------------------------------------- trees

@dataclass(frozen=True)
class Leaf:
    label: int
    formula: Formula

    @property
    def conclusion(self) -> Formula:
        return self.formula


@dataclass(frozen=True)
class Node:
    rule: str
    premises: tuple
    conclusion: Formula
    discharges: tuple = ()      # per slot: tuple of (label, formula), sorted by label
    eigen: Optional[str] = None

    @property
    def spec(self) -> RuleSpec:
        return RULES[self.rule]

    def slot_labels(self, s: int) -> frozenset:
        return frozenset(l for l, _ in self.discharges[s])

    def all_discharged(self) -> frozenset:
        return frozenset(l for grp in self.discharges for l, _ in grp)


Deduction = object  # Leaf | Node


def node(rule: str, premises, conclusion=None, discharges=None, eigen=None) -> Node:
    """Convenience constructor; the conclusion defaults to the first arbitrary premise's."""
    spec = RULES[rule]
    premises = tuple(premises)
    if conclusion is None:
        conclusion = default_conclusion(rule, premises)
        if conclusion is None:
            raise ValueError("rule %s needs an explicit conclusion" % rule)
    if discharges is None:
        discharges = [()] * len(spec.slots)
    groups = tuple(tuple(sorted((int(l), f) for l, f in grp)) for grp in discharges)
    return Node(rule, premises, conclusion, groups, eigen)


def default_conclusion(rule: str, premises) -> Optional[Formula]:
    spec = RULES[rule]
    arb = spec.arbitrary()
    if arb:
        return premises[arb[0]].conclusion if arb[0] < len(premises) else None
    if rule == "cAndI" and len(premises) == 2:
        return And(premises[0].conclusion, premises[1].conclusion)
    return None


# ------------------------------------------------------------ traversal

Path = Tuple[int, ...]


def walk(d, path: Path = ()) -> Iterator[Tuple[Path, object]]:
    """Preorder traversal yielding ``(path, subdeduction)``."""
    stack = [(path, d)]
    while stack:
        p, t = stack.pop()
        yield p, t
        if isinstance(t, Node):
            for i in range(len(t.premises) - 1, -1, -1):
                stack.append((p + (i,), t.premises[i]))


def get(d, path: Path):
    for i in path:
        d = d.premises[i]
    return d


def replace(d, path: Path, new):
    """Return ``d`` with the subdeduction at ``path`` replaced by ``new``."""
    if not path:
        return new
    i = path[0]
    prem = list(d.premises)
    prem[i] = replace(prem[i], path[1:], new)
    return Node(d.rule, tuple(prem), d.conclusion, d.discharges, d.eigen)


def with_premises(n: Node, premises, conclusion=None) -> Node:
    return Node(n.rule, tuple(premises), n.conclusion if conclusion is None else conclusion,
                n.discharges, n.eigen)


def size(d) -> int:
    return sum(1 for _ in walk(d))


def height(d) -> int:
    if isinstance(d, Leaf):
        return 1
    return 1 + max((height(p) for p in d.premises), default=0)


def leaves(d) -> Iterator[Tuple[Path, Leaf]]:
    for p, t in walk(d):
        if isinstance(t, Leaf):
            yield p, t


def labels(d) -> set:
    out = set()
    for _, t in walk(d):
        if isinstance(t, Leaf):
            out.add(t.label)
        else:
            out |= t.all_discharged()
    return out


def occurrences(d, label: int) -> List[Path]:
    return [p for p, l in leaves(d) if l.label == label]


def formulas(d) -> Iterator[Tuple[Path, Formula]]:
    """Every formula occurrence, identified by the path of the subtree concluding it."""
    for p, t in walk(d):
        yield p, t.conclusion


def all_params(d) -> set:
    out = set()
    for _, t in walk(d):
        out |= params(t.conclusion)
        if isinstance(t, Node):
            if t.eigen:
                out.add(t.eigen)
            for grp in t.discharges:
                for _, f in grp:
                    out |= params(f)
    return out


def fresh_label(d) -> int:
    """Smallest label above every label used in ``d``."""
    return max(labels(d), default=0) + 1


def param_names() -> Iterator[str]:
    for c in "abcdefghijklmnopqrstuvwxyz":
        yield c
    for i in count(1):
        for c in "abcdefghijklmnopqrstuvwxyz":
            yield "%s%d" % (c, i)


def fresh_param(d, avoid=()) -> str:
    used = all_params(d) | set(avoid)
    for name in param_names():
        if name not in used:
            return name


class LabelSupply:
    """Hands out labels not occurring in a given deduction."""

    def __init__(self, d=None, start: int = 1):
        self.next = max(start, fresh_label(d) if d is not None else 1)

    def __call__(self) -> int:
        n = self.next
        self.next += 1
        return n


def open_assumptions(d) -> frozenset:
    """Pairs ``(label, formula)`` of assumption classes with an undischarged occurrence."""
    out = set()
    _open(d, frozenset(), out)
    return frozenset(out)


def _open(d, closed, out):
    stack = [(d, closed)]
    while stack:
        t, cl = stack.pop()
        if isinstance(t, Leaf):
            if t.label not in cl:
                out.add((t.label, t.formula))
            continue
        above = {}
        for s, (pi, _) in enumerate(t.spec.slots if t.rule in RULES else ()):
            if s < len(t.discharges):
                above.setdefault(pi, set()).update(l for l, _ in t.discharges[s])
        for i, p in enumerate(t.premises):
            stack.append((p, cl | above.get(i, frozenset())))


def open_formulas(d) -> frozenset:
    """The set of formula shapes of the undischarged assumptions."""
    return frozenset(f for _, f in open_assumptions(d))


def discharger_map(d) -> Dict[int, Tuple[Path, int]]:
    """label -> (node path, slot) for every discharged label (first one wins)."""
    out = {}
    for p, t in walk(d):
        if isinstance(t, Node):
            for s, grp in enumerate(t.discharges):
                for l, _ in grp:
                    out.setdefault(l, (p, s))
    return out


# --------------------------------------------------------------- checker

@dataclass
class CheckReport:
    valid: bool
    conclusion: Optional[Formula]
    open_assumptions: frozenset
    diagnostics: List[Tuple[Path, str]] = field(default_factory=list)

    def __bool__(self):
        return self.valid


def check(d, system: str = "cex", *, conventional: bool = False,
          allow_bot: bool = False) -> CheckReport:
    """Decide whether ``d`` is a correctly formed deduction of ``system``.

    Failures are reported as ``(path, message)`` diagnostics rather than
    raised; the checker accepts arbitrary (even ill-typed) trees.
    """
    diags: List[Tuple[Path, str]] = []
    try:
        allowed = rules_for(system, conventional, allow_bot)
    except ValueError as e:
        return CheckReport(False, None, frozenset(), [((), str(e))])
    if not isinstance(d, (Leaf, Node)):
        return CheckReport(False, None, frozenset(), [((), "not a deduction")])

    label_formula: Dict[int, Formula] = {}
    leaf_paths: Dict[int, List[Path]] = {}
    discharged_at: Dict[int, Tuple[Path, int]] = {}

    def note_label(path, label, f):
        if not isinstance(label, int) or label < 1:
            diags.append((path, "assumption labels must be positive integers, got %r" % (label,)))
            return
        prev = label_formula.setdefault(label, f)
        if prev != f:
            diags.append((path, "label %d is used for distinct formulas %s and %s"
                          % (label, pretty(prev), pretty(f))))

    for path, t in walk(d):
        if isinstance(t, Leaf):
            if not isinstance(t.formula, Formula):
                diags.append((path, "assumption is not a formula"))
                continue
            _closed(t.formula, path, diags)
            note_label(path, t.label, t.formula)
            leaf_paths.setdefault(t.label, []).append(path)
            continue
        if not isinstance(t, Node) or t.rule not in RULES:
            diags.append((path, "unknown rule %r" % (getattr(t, "rule", t),)))
            continue
        if t.rule not in allowed:
            diags.append((path, "rule %s is not available in this system" % t.rule))
        spec = t.spec
        if len(t.premises) != spec.arity:
            diags.append((path, "%s takes %d premises, got %d" % (t.rule, spec.arity, len(t.premises))))
            continue
        if any(not isinstance(p, (Leaf, Node)) for p in t.premises):
            diags.append((path, "premise is not a deduction"))
            continue
        if len(t.discharges) != len(spec.slots):
            diags.append((path, "%s has %d discharge groups, got %d"
                          % (t.rule, len(spec.slots), len(t.discharges))))
            continue
        if not isinstance(t.conclusion, Formula):
            diags.append((path, "conclusion is not a formula"))
            continue
        _closed(t.conclusion, path, diags)
        for s, grp in enumerate(t.discharges):
            for l, f in grp:
                note_label(path, l, f)
                if l in discharged_at:
                    diags.append((path, "assumption class %d is discharged twice" % l))
                else:
                    discharged_at[l] = (path, s)
        if spec.eigen != (t.eigen is not None):
            diags.append((path, "%s %s an eigenparameter" % (t.rule, "needs" if spec.eigen else "takes no")))
            continue
        _check_schema(t, path, diags)

    # assumption-class coherence and vacuous discharge
    for l, (path, s) in sorted(discharged_at.items()):
        t = get(d, path)
        pi, _ = t.spec.slots[s]
        scope = path + (pi,)
        occ = leaf_paths.get(l, [])
        stray = [p for p in occ if p[:len(scope)] != scope]
        if stray:
            diags.append((path, "assumption class %d has occurrences outside the scope of "
                          "the %s that discharges it" % (l, t.rule)))
        if not occ and t.spec.premises[pi] == ARBITRARY and t.rule != "andE":
            diags.append((path, "vacuous discharge of class %d above an arbitrary premise" % l))
    for path, t in walk(d):
        if isinstance(t, Node) and t.rule in RULES and len(t.discharges) == len(t.spec.slots):
            for s, (pi, _) in enumerate(t.spec.slots):
                if not t.discharges[s] and t.spec.premises[pi] == ARBITRARY and t.rule != "andE":
                    diags.append((path, "vacuous discharge above an arbitrary premise of %s" % t.rule))

    if not diags:
        _check_eigen(d, diags)

    opened = open_assumptions(d) if not diags else _safe_open(d)
    return CheckReport(not diags, getattr(d, "conclusion", None), opened, diags)


def _safe_open(d):
    try:
        return open_assumptions(d)
    except Exception:  # malformed trees
        return frozenset()


def _closed(f, path, diags):
    fv = free_vars(f)
    if fv:
        diags.append((path, "formula %s has free variables %s" % (pretty(f), ", ".join(sorted(fv)))))


def _group_formula(t, s, path, diags):
    """The single formula shared by the classes of discharge group ``s``."""
    fs = {f for _, f in t.discharges[s]}
    if len(fs) > 1:
        diags.append((path, "discharge group %d of %s mixes formulas" % (s + 1, t.rule)))
        return None
    return next(iter(fs), None)


def _check_schema(t: Node, path, diags):
    rule = t.rule
    P = [p.conclusion for p in t.premises]
    C = t.conclusion
    G = [_group_formula(t, s, path, diags) for s in range(len(t.discharges))]

    def bad(msg):
        diags.append((path, "%s: %s" % (rule, msg)))

    def want(group, f, what):
        if G[group] is not None and G[group] != f:
            bad("discharged %s must be %s, not %s" % (what, pretty(f), pretty(G[group])))

    for i in t.spec.arbitrary():
        if P[i] != C:
            bad("arbitrary premise %s differs from the conclusion %s" % (pretty(P[i]), pretty(C)))

    if rule == "andI":
        want(0, And(P[0], P[1]), "major assumption")
    elif rule == "andE":
        if not isinstance(P[0], And):
            return bad("major premise must be a conjunction")
        want(0, P[0].left, "assumption")
        want(1, P[0].right, "assumption")
    elif rule in ("orIL", "orIR"):
        g = G[0]
        if g is not None:
            side = g.left if rule == "orIL" else g.right
            if not isinstance(g, Or) or side != P[0]:
                bad("major assumption %s does not fit the specific premise %s" % (pretty(g), pretty(P[0])))
    elif rule == "orE":
        if not isinstance(P[0], Or):
            return bad("major premise must be a disjunction")
        want(0, P[0].left, "assumption")
        want(1, P[0].right, "assumption")
    elif rule == "impI":
        g = G[0]
        if g is not None and (not isinstance(g, Imp) or g.right != P[0]):
            bad("major assumption %s does not fit the specific premise %s" % (pretty(g), pretty(P[0])))
    elif rule in ("tr", "notI"):
        g = G[1]
        if g is not None:
            if rule == "tr" and not isinstance(g, Imp):
                return bad("major assumption must be an implication")
            if rule == "notI" and not isinstance(g, Not):
                return bad("major assumption must be a negation")
            want(0, g.left if rule == "tr" else g.sub, "minor assumption")
    elif rule == "impE":
        if not isinstance(P[0], Imp):
            return bad("major premise must be an implication")
        if P[1] != P[0].left:
            bad("minor premise must be %s" % pretty(P[0].left))
        want(0, P[0].right, "assumption")
    elif rule == "notE":
        if not isinstance(P[0], Not):
            return bad("major premise must be a negation")
        if P[1] != P[0].sub:
            bad("minor premise must be %s" % pretty(P[0].sub))
    elif rule in ("exI", "allI"):
        g = G[0]
        Q = Exists if rule == "exI" else Forall
        if g is None:
            return
        if not isinstance(g, Q):
            return bad("major assumption must be quantified")
        if rule == "exI":
            if not match_instance(g.body, g.var, P[0])[0]:
                bad("specific premise %s is not an instance of %s" % (pretty(P[0]), pretty(g)))
        else:
            if instantiate(g, Param(t.eigen)) != P[0]:
                bad("specific premise must be %s" % pretty(instantiate(g, Param(t.eigen))))
    elif rule in ("exE", "allE"):
        Q = Exists if rule == "exE" else Forall
        if not isinstance(P[0], Q):
            return bad("major premise must be quantified")
        if G[0] is not None:
            if rule == "exE":
                want(0, instantiate(P[0], Param(t.eigen)), "assumption")
            elif not match_instance(P[0].body, P[0].var, G[0])[0]:
                bad("assumption %s is not an instance of %s" % (pretty(G[0]), pretty(P[0])))
    elif rule == "botE":
        if not isinstance(P[0], Bot):
            bad("major premise must be ⊥")
        if not is_atomic(C):
            bad("conclusion must be atomic")
    elif rule == "cAndI":
        if C != And(P[0], P[1]):
            bad("conclusion must be %s" % pretty(And(P[0], P[1])))
    elif rule in ("cOrIL", "cOrIR"):
        side = getattr(C, "left" if rule == "cOrIL" else "right", None)
        if not isinstance(C, Or) or side != P[0]:
            bad("conclusion %s does not fit the premise %s" % (pretty(C), pretty(P[0])))
    elif rule == "cImpI":
        if not isinstance(C, Imp) or C.right != P[0]:
            return bad("conclusion %s does not fit the premise %s" % (pretty(C), pretty(P[0])))
        want(0, C.left, "assumption")
    elif rule == "cExI":
        if not isinstance(C, Exists) or not match_instance(C.body, C.var, P[0])[0]:
            bad("premise %s is not an instance of the conclusion" % pretty(P[0]))


def _check_eigen(d, diags):
    for path, t in walk(d):
        if not isinstance(t, Node) or not t.spec.eigen:
            continue
        a = t.eigen
        if t.rule == "exE":
            major, arb = t.premises
            if a in params(major.conclusion):
                diags.append((path, "eigenparameter %s occurs in the major premise" % a))
            if a in params(t.conclusion):
                diags.append((path, "eigenparameter %s occurs in the conclusion" % a))
            own = t.slot_labels(0)
            for l, f in open_assumptions(arb):
                if l not in own and a in params(f):
                    diags.append((path, "eigenparameter %s occurs in open assumption %s"
                                  % (a, pretty(f))))
        else:  # allI
            spec_premise = t.premises[0]
            for l, f in sorted(open_assumptions(spec_premise), key=lambda x: x[0]):
                if a in params(f):
                    diags.append((path, "eigenparameter %s occurs in open assumption %s"
                                  % (a, pretty(f))))
            for _, f in t.discharges[0]:
                if a in params(f):
                    diags.append((path, "eigenparameter %s occurs in %s" % (a, pretty(f))))


def canonical(d, rename_open: bool = True):
    """Relabel classes 1, 2, ... in order of first appearance (preorder, a
    node's discharge groups before its premises).  Two deductions are equal up
    to label renaming iff their canonical forms are equal."""
    mapping: Dict[int, int] = {}
    internal = set()
    for _, t in walk(d):
        if isinstance(t, Node):
            internal |= t.all_discharged()
    for _, t in walk(d):
        seen = [l for grp in t.discharges for l, _ in grp] if isinstance(t, Node) else [t.label]
        for l in seen:
            if l not in mapping and (rename_open or l in internal):
                mapping[l] = len(mapping) + 1
    if not rename_open:
        # keep open labels but move internal ones out of their way
        base = max((l for l in labels(d) if l not in internal), default=0)
        mapping = {l: base + n for l, n in mapping.items()}
    return _relabel(d, mapping)


def _relabel(d, mapping):
    if isinstance(d, Leaf):
        return Leaf(mapping.get(d.label, d.label), d.formula)
    groups = tuple(tuple(sorted((mapping.get(l, l), f) for l, f in grp)) for grp in d.discharges)
    return Node(d.rule, tuple(_relabel(p, mapping) for p in d.premises), d.conclusion, groups, d.eigen)

"""Maximal formulas, segments, rank, branches and the subformula audit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .deduction import (
    ARBITRARY, ELIM_RULES, INTRO_RULES, RULES, Leaf, Node, Path, get, walk,
    open_assumptions,
)
from .logic import Formula, degree, is_subformula

# which introductions discharge a major assumption that the elimination can consume
MATCHING_INTROS = {
    "andE": {"andI"}, "orE": {"orIL", "orIR"}, "impE": {"impI", "tr"},
    "notE": {"notI"}, "exE": {"exI"}, "allE": {"allI"},
}


@dataclass(frozen=True, order=True)
class Rank:
    d: int
    l: int

    def __str__(self):
        return "<%d,%d>" % (self.d, self.l)


@dataclass(frozen=True)
class Segment:
    occurrences: Tuple[Path, ...]      # top to bottom
    formula: Formula

    @property
    def length(self) -> int:
        return len(self.occurrences)

    @property
    def degree(self) -> int:
        return degree(self.formula)

    @property
    def last(self) -> Path:
        return self.occurrences[-1]


@dataclass(frozen=True)
class MaximalFormula:
    path: Path                 # the leaf occurrence (major premise of the elimination)
    intro: Path                # the introduction discharging it
    formula: Formula

    @property
    def degree(self) -> int:
        return degree(self.formula)


@dataclass(frozen=True)
class Branch:
    occurrences: Tuple[Path, ...]
    order: Optional[int]


def _parent(path: Path):
    return path[:-1], path[-1]


def _slot_role(node: Node, premise: int) -> str:
    return node.spec.premises[premise]


def intro_discharges(d) -> Dict[int, Tuple[Path, str, int]]:
    """label -> (node path, rule, slot) for every label discharged by a rule."""
    out = {}
    for p, t in walk(d):
        if isinstance(t, Node):
            for s, grp in enumerate(t.discharges):
                for l, _ in grp:
                    out[l] = (p, t.rule, s)
    return out


def maximal_formulas(d) -> List[MaximalFormula]:
    dis = intro_discharges(d)
    out = []
    for p, t in walk(d):
        if not (isinstance(t, Node) and t.rule in MATCHING_INTROS and t.premises):
            continue
        major = t.premises[0]
        if not isinstance(major, Leaf) or major.label not in dis:
            continue
        ip, irule, slot = dis[major.label]
        if irule in MATCHING_INTROS[t.rule] and RULES[irule].slots[slot][1] == "major":
            out.append(MaximalFormula(p + (0,), ip, major.formula))
    return out


def _is_top(t) -> bool:
    """An occurrence above which no arbitrary premise continues the formula."""
    return isinstance(t, Leaf) or ARBITRARY not in t.spec.premises


def segments(d) -> List[Segment]:
    """All segments in non-extendable form, in preorder of their first occurrence."""
    out = []
    for p, t in walk(d):
        if not _is_top(t):
            continue
        occ = [p]
        q = p
        while q:
            parent, i = _parent(q)
            if _slot_role(get(d, parent), i) != ARBITRARY:
                break
            q = parent
            occ.append(q)
        starts_negE = isinstance(t, Node) and t.rule in ("notE", "botE")
        if len(occ) > 1 or starts_negE:
            out.append(Segment(tuple(occ), t.conclusion))
    return out


def is_major_of_elim(d, path: Path) -> bool:
    if not path:
        return False
    parent, i = _parent(path)
    return i == 0 and get(d, parent).rule in ELIM_RULES


def maximal_segments(d) -> List[Segment]:
    return [s for s in segments(d) if is_major_of_elim(d, s.last)]


def rank(d) -> Rank:
    mfs = maximal_formulas(d)
    mss = maximal_segments(d)
    top = max([m.degree for m in mfs] + [s.degree for s in mss], default=None)
    if top is None:
        return Rank(0, 0)
    l = sum(s.length for s in mss if s.degree == top) + sum(1 for m in mfs if m.degree == top)
    return Rank(top, l)


def is_normal(d) -> bool:
    return not maximal_formulas(d) and not maximal_segments(d)


def elim_majors_are_leaves(d) -> List[Path]:
    """Paths of elimination major premises that are not assumptions."""
    return [p + (0,) for p, t in walk(d)
            if isinstance(t, Node) and t.rule in ELIM_RULES and not isinstance(t.premises[0], Leaf)]


# ---------------------------------------------------------------- branches

def branches(d) -> List[Branch]:
    """Every branch with its order, enumerated depth first and leftmost first."""
    dis = intro_discharges(d)
    leaf_paths: Dict[int, List[Path]] = {}
    for p, t in walk(d):
        if isinstance(t, Leaf):
            leaf_paths.setdefault(t.label, []).append(p)

    def starts(p, leaf: Leaf) -> bool:
        if leaf.label not in dis:
            return True
        _, rule, slot = dis[leaf.label]
        if rule in ELIM_RULES:
            return False
        role = RULES[rule].slots[slot][1]
        return role != "major" or rule in ("tr", "notI")

    def successors(q: Path) -> Optional[List[Path]]:
        """Next occurrences, or None when the branch ends at ``q``."""
        if not q:
            return None
        parent, i = _parent(q)
        n = get(d, parent)
        role = n.spec.premises[i]
        if role == "minor" and n.rule in ("impE", "notE"):
            return None
        if role == "major" and n.rule in ("notE", "botE"):
            return [parent]
        if role == "major":
            return [lp for s in range(len(n.spec.slots))
                    for l, _ in n.discharges[s] for lp in leaf_paths.get(l, [])]
        if role == "specific":
            if n.spec.kind == "conv":
                return [parent]
            s = n.spec.major_slot()
            return [lp for l, _ in n.discharges[s] for lp in leaf_paths.get(l, [])]
        return [parent]

    found: List[Tuple[Path, ...]] = []
    for p, t in walk(d):
        if isinstance(t, Leaf) and starts(p, t):
            _extend((p,), successors, found)
    orders: List[Optional[int]] = [0 if b[-1] == () else None for b in found]
    # propagate orders through minor premises of impE / notE
    changed = True
    while changed:
        changed = False
        on_branch: Dict[Path, int] = {}
        for b, o in zip(found, orders):
            if o is not None:
                for q in b:
                    on_branch[q] = min(o, on_branch.get(q, o))
        for k, b in enumerate(found):
            if orders[k] is not None or not b[-1]:
                continue
            parent, _ = _parent(b[-1])
            major = parent + (0,)
            if major in on_branch:
                orders[k] = on_branch[major] + 1
                changed = True
    return [Branch(b, o) for b, o in zip(found, orders)]


def _extend(prefix, successors, found):
    stack = [prefix]
    while stack:
        cur = stack.pop()
        nxt = successors(cur[-1])
        if nxt is None:
            found.append(cur)
            continue
        for q in reversed(nxt):
            if q not in cur:
                stack.append(cur + (q,))


def ei_split(d, b: Branch):
    """Split a branch into E-part, minimal part and I-part (lists of paths)."""
    occ = list(b.occurrences)
    e_end = 0
    while e_end < len(occ) and is_major_of_elim(d, occ[e_end]):
        e_end += 1
    dis = intro_discharges(d)
    i_start = len(occ)
    for k in range(e_end, len(occ)):
        t = get(d, occ[k])
        if isinstance(t, Leaf) and _intro_major(dis, t.label):
            i_start = k
            break
    return occ[:e_end], occ[e_end:i_start], occ[i_start:]


def _intro_major(dis, label) -> bool:
    if label not in dis:
        return False
    _, rule, slot = dis[label]
    return rule in INTRO_RULES and RULES[rule].slots[slot][1] == "major"


def e_before_i_violations(d) -> List[Branch]:
    """Branches on which an elimination major premise follows an intro-discharged major assumption."""
    dis = intro_discharges(d)
    bad = []
    for b in branches(d):
        seen_intro = False
        for q in b.occurrences:
            t = get(d, q)
            if isinstance(t, Leaf) and _intro_major(dis, t.label):
                seen_intro = True
            if is_major_of_elim(d, q) and seen_intro:
                bad.append(b)
                break
    return bad


# ---------------------------------------------------------- subformulas

def subformula_audit(d) -> List[Path]:
    """Occurrences that are subformulas neither of the conclusion nor of an open assumption."""
    roots = [d.conclusion] + sorted({f for _, f in open_assumptions(d)}, key=str)
    cache: Dict[Formula, bool] = {}
    bad = []
    for p, t in walk(d):
        forms = [t.conclusion]
        if isinstance(t, Node):
            forms += [f for grp in t.discharges for _, f in grp]
        for f in forms:
            if f not in cache:
                cache[f] = any(is_subformula(f, g) for g in roots)
            if not cache[f]:
                bad.append(p)
                break
    return bad


def analyze(d) -> dict:
    """Plain-data summary used by the command line front end."""
    fmt = lambda p: list(p)
    brs = branches(d)
    return {
        "rank": [rank(d).d, rank(d).l],
        "normal": is_normal(d),
        "maximal_formulas": [{"path": fmt(m.path), "formula": str(m.formula), "degree": m.degree}
                             for m in maximal_formulas(d)],
        "maximal_segments": [{"occurrences": [fmt(q) for q in s.occurrences],
                              "formula": str(s.formula), "length": s.length, "degree": s.degree}
                             for s in maximal_segments(d)],
        "branches": [{"occurrences": [fmt(q) for q in b.occurrences], "order": b.order,
                      "split": [[fmt(q) for q in part] for part in ei_split(d, b)]}
                     for b in brs],
        "subformula_violations": [fmt(p) for p in subformula_audit(d)],
    }

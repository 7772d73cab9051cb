"""Tree surgery: relabelling, grafting, vacuous-discharge cleanup, unique
discharge expansion and collapse, and the conventional-rule translation."""
from __future__ import annotations

from collections import Counter
from typing import Dict, Optional

from .deduction import (
    ARBITRARY, RULES, LabelSupply, Leaf, Node, Path, canonical, fresh_param,
    get, occurrences, replace, walk,
)
from .logic import Param, params, subst_param_formula


class TransformError(ValueError):
    pass


# ------------------------------------------------------------ relabelling

def relabel(d, mapping: Dict[int, int]):
    """Rename assumption labels according to ``mapping`` (others unchanged)."""
    if not mapping:
        return d
    if isinstance(d, Leaf):
        return Leaf(mapping.get(d.label, d.label), d.formula)
    groups = tuple(tuple(sorted((mapping.get(l, l), f) for l, f in grp)) for grp in d.discharges)
    return Node(d.rule, tuple(relabel(p, mapping) for p in d.premises), d.conclusion, groups, d.eigen)


def discharged_within(d) -> set:
    out = set()
    for _, t in walk(d):
        if isinstance(t, Node):
            out |= t.all_discharged()
    return out


def fresh_copy(d, supply: LabelSupply):
    """Copy of ``d`` whose internally discharged classes get fresh labels."""
    inner = sorted(discharged_within(d))
    return relabel(d, {l: supply() for l in inner})


def graft(d, plugs: Dict[int, object], supply: LabelSupply):
    """Replace every leaf whose label is in ``plugs`` by a fresh copy of the plug."""
    if not plugs:
        return d
    if isinstance(d, Leaf):
        if d.label in plugs:
            return fresh_copy(plugs[d.label], supply)
        return d
    return Node(d.rule, tuple(graft(p, plugs, supply) for p in d.premises),
                d.conclusion, d.discharges, d.eigen)


def subst_param(d, a: str, t):
    """Replace the parameter ``a`` by the term ``t`` throughout ``d``."""
    if isinstance(d, Leaf):
        return Leaf(d.label, subst_param_formula(d.formula, a, t))
    groups = tuple(tuple((l, subst_param_formula(f, a, t)) for l, f in grp) for grp in d.discharges)
    eigen = d.eigen
    if eigen == a and isinstance(t, Param):
        eigen = t.name
    return Node(d.rule, tuple(subst_param(p, a, t) for p in d.premises),
                subst_param_formula(d.conclusion, a, t), groups, eigen)


# ------------------------------------------------------- vacuous discharge

def clean_vacuous(d):
    """Drop discharge labels without occurrences, then remove every rule
    application left with an empty discharge above an arbitrary premise; the
    deduction continues from that premise."""
    return _clean(d)[0]


def _clean(d):
    if isinstance(d, Leaf):
        return d, Counter({d.label: 1})
    prem, counts = [], []
    for p in d.premises:
        np_, c = _clean(p)
        prem.append(np_)
        counts.append(c)
    spec = RULES[d.rule]
    groups = []
    for s, (pi, _) in enumerate(spec.slots):
        groups.append(tuple((l, f) for l, f in d.discharges[s] if counts[pi][l]))
    # a premise is dispensable when every group above it is empty
    for i, kind in enumerate(spec.premises):
        if kind != ARBITRARY:
            continue
        above = [s for s, (pi, _) in enumerate(spec.slots) if pi == i]
        if above and all(not groups[s] for s in above):
            return prem[i], counts[i]
    total = Counter()
    for c in counts:
        total.update(c)
    return Node(d.rule, tuple(prem), d.conclusion, tuple(groups), d.eigen), total


def is_vacuous_free(d) -> bool:
    return clean_vacuous(d) == d


# ---------------------------------------------------- parameter convention

def _param_counts(d) -> Counter:
    c = Counter()
    for _, t in walk(d):
        c.update(params(t.conclusion))
        if isinstance(t, Node):
            if t.eigen:
                c[t.eigen] += 1
            for grp in t.discharges:
                for _, f in grp:
                    c.update(params(f))
    return c


def parameter_convention(d):
    """Give every ∃E its own eigenparameter, occurring only above it.

    Offending applications are renamed inside their arbitrary premise; the
    rename is sound because the eigen restriction confines the old name there.
    """
    while True:
        total = _param_counts(d)
        claimed = set()
        target = None
        for p, t in walk(d):
            if isinstance(t, Node) and t.rule == "exE":
                a = t.eigen
                inside = _param_counts(t.premises[1])
                inside[a] += 1
                for _, f in t.discharges[0]:
                    inside.update(params(f))
                if a in claimed or total[a] > inside[a]:
                    target = (p, t)
                    break
                claimed.add(a)
        if target is None:
            return d
        p, t = target
        b = fresh_param(d)
        new = Node(t.rule, (t.premises[0], subst_param(t.premises[1], t.eigen, Param(b))),
                   t.conclusion,
                   tuple(tuple((l, subst_param_formula(f, t.eigen, Param(b))) for l, f in grp)
                         for grp in t.discharges), b)
        d = replace(d, p, new)


# ------------------------------------------------------- unique discharge

GENERAL_INTROS = ("andI", "orIL", "orIR", "impI", "tr", "notI", "exI", "allI")


def major_count(n: Node, d=None) -> int:
    spec = n.spec
    s = spec.major_slot()
    if s is None:
        return 0
    pi = spec.slots[s][0]
    labs = n.slot_labels(s)
    return sum(1 for _, l in _leaves(n.premises[pi]) if l.label in labs)


def _leaves(d):
    for p, t in walk(d):
        if isinstance(t, Leaf):
            yield p, t


def expand_node(n: Node, supply: LabelSupply, keep: Optional[Path] = None):
    """Split one introduction into a stack of applications, one per major
    occurrence.  The innermost application discharges the occurrence at
    ``keep`` (a path relative to the arbitrary premise; default the leftmost)
    under the original label; outer ones get fresh labels and fresh copies of
    the other premises."""
    spec = n.spec
    s = spec.major_slot()
    pi = spec.slots[s][0]
    body = n.premises[pi]
    labs = n.slot_labels(s)
    occ = [p for p, l in _leaves(body) if l.label in labs]
    if len(occ) <= 1:
        return n
    if keep is not None and keep in occ:
        occ.remove(keep)
        occ.insert(0, keep)
    new_labels = [get(body, occ[0]).label] + [supply() for _ in occ[1:]]
    for p, nl in zip(occ, new_labels):
        leaf = get(body, p)
        body = replace(body, p, Leaf(nl, leaf.formula))
    major_formula = get(body, occ[0]).formula
    others = [i for i in range(spec.arity) if i != pi]
    cur = body
    for k, nl in enumerate(new_labels):
        prem = list(n.premises)
        groups = list(n.discharges)
        groups[s] = ((nl, major_formula),)
        if k > 0:
            # fresh copy of the remaining premises, with its own minor class (tr/notI)
            inner = {}
            for i in others:
                for ms, (mpi, _) in enumerate(spec.slots):
                    if mpi == i:
                        for l, f in n.discharges[ms]:
                            inner[l] = supply()
            for ms, (mpi, _) in enumerate(spec.slots):
                if ms != s:
                    groups[ms] = tuple(sorted((inner.get(l, l), f) for l, f in n.discharges[ms]))
            for i in others:
                prem[i] = fresh_copy(relabel(n.premises[i], inner), supply)
        prem[pi] = cur
        cur = Node(n.rule, tuple(prem), n.conclusion, tuple(groups), n.eigen)
    return cur


def to_unique_discharge(d):
    """Every general introduction ends up discharging one major occurrence."""
    supply = LabelSupply(d)
    return _unique(d, supply)


def _unique(d, supply):
    if isinstance(d, Leaf):
        return d
    n = Node(d.rule, tuple(_unique(p, supply) for p in d.premises), d.conclusion,
             d.discharges, d.eigen)
    if n.rule in GENERAL_INTROS and major_count(n) > 1:
        return expand_node(n, supply)
    return n


def is_unique_discharge(d) -> bool:
    return all(major_count(t) == 1 for _, t in walk(d)
               if isinstance(t, Node) and t.rule in GENERAL_INTROS)


def _same_up_to_labels(a, b) -> bool:
    return canonical(a, rename_open=False) == canonical(b, rename_open=False)


def _side(n: Node, i: int):
    """Premise ``i`` wrapped so that the classes discharged above it count as internal."""
    groups = tuple(grp if pi == i else () for grp, (pi, _) in zip(n.discharges, n.spec.slots))
    return Node(n.rule, (n.premises[i],), n.conclusion, groups, None)


def collapse_unique_discharge(d):
    """Merge stacks of identical introductions back into one application."""
    if isinstance(d, Leaf):
        return d
    d = Node(d.rule, tuple(collapse_unique_discharge(p) for p in d.premises), d.conclusion,
             d.discharges, d.eigen)
    while d.rule in GENERAL_INTROS:
        spec = d.spec
        s = spec.major_slot()
        pi = spec.slots[s][0]
        inner = d.premises[pi]
        if not (isinstance(inner, Node) and inner.rule == d.rule
                and inner.conclusion == d.conclusion and inner.eigen == d.eigen):
            break
        outer_major = {f for _, f in d.discharges[s]}
        if outer_major != {f for _, f in inner.discharges[s]}:
            break
        others = [i for i in range(spec.arity) if i != pi]
        # side premises, with the classes their node discharges there, must agree up to labels
        if not all(_same_up_to_labels(_side(d, i), _side(inner, i)) for i in others):
            break
        keep = min(l for grp in (d.discharges[s], inner.discharges[s]) for l, _ in grp)
        merged = {l: keep for grp in (d.discharges[s], inner.discharges[s]) for l, _ in grp}
        groups = list(inner.discharges)
        groups[s] = ((keep, next(iter(outer_major))),)
        body = relabel(inner.premises[pi], merged)
        # leaves of the outer minor class live inside the outer side premises, which disappear
        d = Node(d.rule, tuple(body if i == pi else inner.premises[i] for i in range(spec.arity)),
                 d.conclusion, tuple(groups), d.eigen)
    return d


# ------------------------------------------------ conventional translation

CONVENTIONAL = {"cAndI": "andI", "cOrIL": "orIL", "cOrIR": "orIR", "cExI": "exI"}
GENERAL_TO_CONV = {v: k for k, v in CONVENTIONAL.items()}


def from_conventional(d):
    """Replace conclusion-style introductions by assume, conclude and discharge."""
    supply = LabelSupply(d)
    return _from_conv(d, supply)


def _from_conv(d, supply):
    if isinstance(d, Leaf):
        return d
    prem = tuple(_from_conv(p, supply) for p in d.premises)
    C = d.conclusion
    if d.rule in CONVENTIONAL:
        k = supply()
        return Node(CONVENTIONAL[d.rule], prem + (Leaf(k, C),), C, (((k, C),),), None)
    if d.rule == "cImpI":
        k = supply()
        inner = Node("impI", (prem[0], Leaf(k, C)), C, (((k, C),),), None)
        if not d.discharges[0]:
            return inner
        j = supply()
        return Node("tr", (inner, Leaf(j, C)), C, (d.discharges[0], ((j, C),)), None)
    return Node(d.rule, prem, C, d.discharges, d.eigen)


def to_conventional(d):
    """Inverse of :func:`from_conventional`; the input must be in unique discharge form."""
    if not is_unique_discharge(d):
        raise TransformError("deduction is not in unique discharge form; expand it first")
    d = parameter_convention(d)
    return _to_conv(d)


def _own_leaf(n: Node, i: int) -> bool:
    """Premise ``i`` of ``n`` is a leaf of the class the node discharges as major."""
    p = n.premises[i]
    s = n.spec.major_slot()
    return isinstance(p, Leaf) and p.label in n.slot_labels(s)


def _to_conv(d):
    if isinstance(d, Leaf):
        return d
    if d.rule == "tr" and _tr_template(d):
        impi = d.premises[0]
        body = _to_conv(impi.premises[0])
        return Node("cImpI", (body,), d.conclusion, (d.discharges[0],), None)
    if d.rule in GENERAL_TO_CONV or d.rule == "impI":
        spec = d.spec
        s = spec.major_slot()
        pi = spec.slots[s][0]
        side = tuple(_to_conv(d.premises[i]) for i in range(spec.arity) if i != pi)
        (label, F), = d.discharges[s]
        if d.rule == "impI":
            conv = Node("cImpI", side, F, ((),), None)
        else:
            conv = Node(GENERAL_TO_CONV[d.rule], side, F, (), None)
        body = _to_conv(d.premises[pi])
        (path,) = occurrences(body, label)
        return replace(body, path, conv)
    return Node(d.rule, tuple(_to_conv(p) for p in d.premises), d.conclusion,
                d.discharges, d.eigen)


def _tr_template(d: Node) -> bool:
    left, right = d.premises
    return (isinstance(left, Node) and left.rule == "impI" and _own_leaf(left, 1)
            and isinstance(right, Leaf) and right.label in d.slot_labels(1)
            and left.conclusion == d.conclusion)


__all__ = [
    "relabel", "fresh_copy", "graft", "subst_param", "clean_vacuous",
    "parameter_convention", "expand_node", "to_unique_discharge",
    "collapse_unique_discharge", "from_conventional", "to_conventional",
    "is_unique_discharge", "major_count", "GENERAL_INTROS", "TransformError",
]

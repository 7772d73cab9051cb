"""Detour reductions, permutative reductions and the normalization driver."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .analysis import (
    Rank, is_normal, maximal_formulas, maximal_segments, rank,
)
from .deduction import (
    ARBITRARY, LabelSupply, Leaf, Node, Path, check, discharger_map, get, open_assumptions,
    replace, size, walk,
)
from .logic import match_instance
from .transform import (
    clean_vacuous, expand_node, fresh_copy, graft, parameter_convention, subst_param,
)

DETOUR_KIND = {
    ("andE", "andI"): "DetourAnd", ("orE", "orIL"): "DetourOr", ("orE", "orIR"): "DetourOr",
    ("impE", "impI"): "DetourImpI", ("impE", "tr"): "DetourTR", ("notE", "notI"): "DetourNot",
    ("exE", "exI"): "DetourEx",
}


class ReductionError(ValueError):
    """The site does not match the schema of the requested procedure."""


class ForallUnsupported(ValueError):
    """Normalization is not available for deductions using the ∀ rules."""


class BudgetExhausted(RuntimeError):
    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


@dataclass(frozen=True)
class Redex:
    kind: str
    site: Path          # maximal formula leaf, or last occurrence of a maximal segment


@dataclass(frozen=True)
class TraceStep:
    redex: Redex
    rank_before: Rank
    rank_after: Rank
    size_before: int
    size_after: int

    def line(self, n: int) -> str:
        return "%d %s %s %s -> %s" % (n, self.redex.kind, "/".join(map(str, self.redex.site)) or ".",
                                     self.rank_before, self.rank_after)


# ------------------------------------------------------------ detours

def _detour_parts(d, site: Path, elim: str, intros):
    if not site or site[-1] != 0:
        raise ReductionError("site is not the major premise of an elimination")
    e_path = site[:-1]
    E = get(d, e_path)
    if not isinstance(E, Node) or E.rule != elim:
        raise ReductionError("site is not the major premise of %s" % elim)
    leaf = E.premises[0]
    if not isinstance(leaf, Leaf):
        raise ReductionError("major premise of %s is not an assumption" % elim)
    owner = discharger_map(d).get(leaf.label)
    if owner is None:
        raise ReductionError("major premise of %s is not discharged" % elim)
    ip, slot = owner
    I = get(d, ip)
    if I.rule not in intros or I.spec.slots[slot][1] != "major":
        raise ReductionError("major premise of %s is not a major assumption of %s"
                             % (elim, " or ".join(sorted(intros))))
    return e_path, E, ip, I


def _finish(d):
    return parameter_convention(clean_vacuous(d))


def reduce_and(d, site: Path):
    e_path, E, _, I = _detour_parts(d, site, "andE", {"andI"})
    plugs = {l: I.premises[0] for l, _ in E.discharges[0]}
    plugs.update({l: I.premises[1] for l, _ in E.discharges[1]})
    new = graft(E.premises[1], plugs, LabelSupply(d))
    return _finish(replace(d, e_path, new))


def reduce_or(d, site: Path):
    e_path, E, _, I = _detour_parts(d, site, "orE", {"orIL", "orIR"})
    side = 0 if I.rule == "orIL" else 1
    plugs = {l: I.premises[0] for l, _ in E.discharges[side]}
    new = graft(E.premises[1 + side], plugs, LabelSupply(d))
    return _finish(replace(d, e_path, new))


def reduce_impI(d, site: Path):
    e_path, E, _, I = _detour_parts(d, site, "impE", {"impI"})
    plugs = {l: I.premises[0] for l, _ in E.discharges[0]}
    new = graft(E.premises[2], plugs, LabelSupply(d))
    return _finish(replace(d, e_path, new))


def reduce_ex(d, site: Path):
    d = parameter_convention(d)
    e_path, E, _, I = _detour_parts(d, site, "exE", {"exI"})
    q = E.premises[0].formula
    ok, t = match_instance(q.body, q.var, I.premises[0].conclusion)
    if not ok:
        raise ReductionError("specific premise of ∃I is not an instance of %s" % q)
    body = E.premises[1]
    if t is not None:
        body = subst_param(body, E.eigen, t)
    plugs = {l: I.premises[0] for l, _ in E.discharges[0]}
    new = graft(body, plugs, LabelSupply(d))
    return _finish(replace(d, e_path, new))


def build_xi_star(body, e_rel: Path, current, concl, supply: LabelSupply):
    """Re-apply the rules of ``body`` (the arbitrary premise below the
    elimination at ``e_rel``) that discharge assumptions of that elimination's
    minor premise, with ``current`` as the continuing arbitrary premise."""
    E = get(body, e_rel)
    pi1_open = {l for l, _ in open_assumptions(E.premises[1])}
    for m in range(len(e_rel) - 1, -1, -1):
        r = e_rel[:m]
        rho = get(body, r)
        entry = e_rel[m]
        spec = rho.spec
        if spec.premises[entry] != ARBITRARY:
            continue
        above = [s for s, (pi, _) in enumerate(spec.slots) if pi == entry]
        if not any(l in pi1_open for s in above for l, _ in rho.discharges[s]):
            continue
        prem = list(rho.premises)
        prem[entry] = current
        for o in spec.arbitrary():
            if o == entry:
                continue
            tail = replace(body, r, rho.premises[o])
            prem[o] = clean_vacuous(fresh_copy(tail, supply))
        current = Node(rho.rule, tuple(prem), concl, rho.discharges, rho.eigen)
    return current


def _reduce_classical(d, site: Path, elim: str, intro: str):
    e_path, E, ip, I = _detour_parts(d, site, elim, {intro})
    if I.discharges[1] and E.premises[0].label not in I.slot_labels(1):
        raise ReductionError("maximal formula is discharged in the wrong slot")
    supply = LabelSupply(d)
    rel = site[len(ip) + 1:]
    n = sum(1 for _, t in walk(I.premises[1])
            if isinstance(t, Leaf) and t.label in I.slot_labels(1))
    expanded = expand_node(I, supply, keep=rel)
    d = replace(d, ip, expanded)
    ip = ip + (1,) * (n - 1)
    I = get(d, ip)
    body = I.premises[1]
    e_rel = rel[:-1]
    E = get(body, e_rel)
    sigma = graft(I.premises[0], {l: E.premises[1] for l, _ in I.discharges[0]}, supply)
    new = build_xi_star(body, e_rel, sigma, I.conclusion, supply)
    return _finish(replace(d, ip, new))


def reduce_tr(d, site: Path):
    return _reduce_classical(d, site, "impE", "tr")


def reduce_not(d, site: Path):
    return _reduce_classical(d, site, "notE", "notI")


def reduce_detour(d, site: Path):
    """Apply whichever detour procedure matches the maximal formula at ``site``."""
    kind = detour_kind(d, site)
    return {
        "DetourAnd": reduce_and, "DetourOr": reduce_or, "DetourImpI": reduce_impI,
        "DetourTR": reduce_tr, "DetourNot": reduce_not, "DetourEx": reduce_ex,
    }[kind](d, site)


def detour_kind(d, site: Path) -> str:
    if not site:
        raise ReductionError("the conclusion is not a maximal formula")
    E = get(d, site[:-1])
    leaf = get(d, site)
    owner = discharger_map(d).get(getattr(leaf, "label", None))
    if owner is None or site[-1] != 0:
        raise ReductionError("site is not a maximal formula")
    I = get(d, owner[0])
    kind = DETOUR_KIND.get((E.rule, I.rule))
    if kind is None:
        raise ReductionError("no detour procedure for %s over %s" % (E.rule, I.rule))
    return kind


# -------------------------------------------------------- permutations

def permute(d, site: Path):
    """Move the elimination whose major premise ends a maximal segment at
    ``site`` upwards, or dissolve it when the segment starts at ¬E."""
    if not site or site[-1] != 0:
        raise ReductionError("site is not the major premise of an elimination")
    p = site[:-1]
    E = get(d, p)
    R = get(d, site)
    if not isinstance(E, Node) or E.spec.kind != "elim":
        raise ReductionError("site is not the major premise of an elimination")
    if not isinstance(R, Node):
        raise ReductionError("site is an assumption, not the end of a maximal segment")
    supply = LabelSupply(d)
    if R.rule == "notE":
        if not E.spec.arbitrary():
            new = Node("notE", R.premises, E.conclusion, (), None)
        else:
            a0 = E.spec.arbitrary()[0]
            plugs = {}
            for s, (pi, _) in enumerate(E.spec.slots):
                if pi == a0:
                    for l, f in E.discharges[s]:
                        plugs[l] = Node("notE", R.premises, f, (), None)
            new = graft(E.premises[a0], plugs, supply)
        return _finish(replace(d, p, new))
    arb = R.spec.arbitrary()
    if not arb:
        raise ReductionError("%s has no arbitrary premise to permute over" % R.rule)
    template = Node(E.rule, (Leaf(0, R.conclusion),) + E.premises[1:], E.conclusion,
                    E.discharges, E.eigen)
    prem = list(R.premises)
    for k, i in enumerate(arb):
        t = template if k == 0 else fresh_copy(template, supply)
        prem[i] = Node(t.rule, (R.premises[i],) + t.premises[1:], t.conclusion, t.discharges, t.eigen)
    new = Node(R.rule, tuple(prem), E.conclusion, R.discharges, R.eigen)
    return _finish(replace(d, p, new))


def permute_kind(d, site: Path) -> str:
    return "Permute(%s,%s)" % (get(d, site).rule, get(d, site[:-1]).rule)


# ---------------------------------------------------------- normalization

def candidates(d) -> List[Redex]:
    """Redexes of the current highest degree: maximal segments topmost then
    leftmost, followed by maximal formulas in the same order."""
    r = rank(d)
    mss = [s for s in maximal_segments(d) if s.degree == r.d]
    mfs = [m for m in maximal_formulas(d) if m.degree == r.d]
    order = lambda path: (-len(path), path)
    # two segments end at the same site when they run through both arbitrary premises of a rule
    sites = sorted({s.last for s in mss}, key=order)
    out = [Redex(permute_kind(d, q), q) for q in sites]
    out += [Redex(detour_kind(d, m.path), m.path) for m in sorted(mfs, key=lambda m: order(m.path))]
    return out


def apply_redex(d, redex: Redex):
    if redex.kind.startswith("Permute"):
        return permute(d, redex.site)
    return reduce_detour(d, redex.site)


def uses_forall(d) -> bool:
    return any(isinstance(t, Node) and t.rule in ("allI", "allE") for _, t in walk(d))


FORALL_REFUSAL = ("normalization refused: the deduction uses ∀I/∀E, for which the reduction "
                  "procedures do not preserve correctness (the ∀I eigenparameter restriction can fail)")


def prepare(d):
    if uses_forall(d):
        raise ForallUnsupported(FORALL_REFUSAL)
    return parameter_convention(clean_vacuous(d))


def normalize(d, budget: int = 10 ** 6, *, check_steps: bool = False, system: str = "cex"):
    """Normalize ``d``; returns ``(normal_form, trace)``.

    Each step takes the first candidate redex of highest degree whose
    reduction strictly lowers the rank.
    """
    d = prepare(d)
    trace: List[TraceStep] = []
    r = rank(d)
    steps = 0
    while not is_normal(d):
        if steps >= budget:
            raise BudgetExhausted("step budget of %d exhausted" % budget, trace)
        best = None
        for red in candidates(d):
            nd = apply_redex(d, red)
            nr = rank(nd)
            if nr < r:
                best = (red, nd, nr)
                break
            if best is None or nr < best[2]:
                best = (red, nd, nr)
        red, nd, nr = best
        if check_steps:
            rep = check(nd, system)
            if not rep.valid:
                raise AssertionError("step %s produced an invalid deduction: %s" % (red, rep.diagnostics))
        trace.append(TraceStep(red, r, nr, size(d), size(nd)))
        d, r = nd, nr
        steps += 1
    return d, trace


__all__ = [
    "Redex", "TraceStep", "ReductionError", "ForallUnsupported", "BudgetExhausted",
    "reduce_and", "reduce_or", "reduce_impI", "reduce_tr", "reduce_not", "reduce_ex",
    "reduce_detour", "build_xi_star", "permute", "normalize", "candidates", "apply_redex",
]

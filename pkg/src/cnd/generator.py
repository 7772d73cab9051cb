"""Seeded random deductions and bounded enumeration of normal closed proofs."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from .deduction import Leaf, Node, canonical, check, size
from .logic import (
    And, Atom, Exists, Formula, Imp, Not, Or, Param, Var, instantiate, subformulas,
)
from .transform import clean_vacuous, to_conventional, to_unique_discharge

ATOMS = ("p", "q", "r", "s")
TERMS = ("a", "b")


# ------------------------------------------------------------- generation

@dataclass
class _Gen:
    rng: random.Random
    system: str
    label: int = 0
    eigen_count: int = 0
    active_eigen: List[str] = field(default_factory=list)

    def fresh(self) -> int:
        self.label += 1
        return self.label

    def fresh_eigen(self) -> str:
        self.eigen_count += 1
        return "e%d" % self.eigen_count

    # formulas ----------------------------------------------------------
    def atom(self) -> Formula:
        if self.system != "c" and self.rng.random() < 0.3:
            return Atom("F", (Param(self.rng.choice(TERMS)),))
        return Atom(self.rng.choice(ATOMS))

    def formula(self, depth: int) -> Formula:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.35:
            return self.atom()
        k = rng.random()
        if self.system != "c" and k < 0.12:
            v = "x"
            body = Atom("F", (Var(v),)) if rng.random() < 0.6 else \
                And(Atom("F", (Var(v),)), self.atom()) if rng.random() < 0.5 else \
                Or(Atom("F", (Var(v),)), Atom(rng.choice(ATOMS)))
            return Exists(v, body)
        if k < 0.3:
            return Not(self.formula(depth - 1))
        cls = rng.choice((And, Or, Imp))
        return cls(self.formula(depth - 1), self.formula(depth - 1))

    def pick(self, ctx, depth: int = 1) -> Formula:
        """A formula for a side goal, often one already assumed so classes get used."""
        if ctx and self.rng.random() < 0.5:
            recent = [f for _, f in ctx[-3:]]
            return self.rng.choice(recent)
        return self.formula(depth)

    # deductions --------------------------------------------------------
    def leaf(self, goal: Formula, ctx):
        same = [l for l, f in ctx if f == goal]
        if same and self.rng.random() < 0.85:
            return Leaf(self.rng.choice(same), goal)
        return Leaf(self.fresh(), goal)

    def gen(self, goal: Formula, ctx: Tuple, budget: int):
        rng = self.rng
        if budget <= 1:
            return self.leaf(goal, ctx)
        same = [l for l, f in ctx if f == goal]
        if same and rng.random() < 0.3:
            return Leaf(rng.choice(same), goal)
        majors = [(l, f) for l, f in ctx if _eliminable(f, self.system)]
        choice = rng.random()
        if majors and choice < 0.4:
            return self.elim_on(rng.choice(majors[-3:]), goal, ctx, budget)
        if choice < 0.55 and budget >= 3:
            return self.elim_generated(goal, ctx, budget)
        if choice < 0.6 and budget >= 3:
            return self.not_elim(goal, ctx, budget)
        if budget >= 3:
            return self.intro(goal, ctx, budget)
        return self.leaf(goal, ctx)

    def split(self, budget: int, parts: int) -> List[int]:
        budget -= 1
        if budget < parts:
            return [1] * parts
        cuts = sorted(self.rng.randint(0, budget - parts) for _ in range(parts - 1))
        sizes, prev = [], 0
        for c in cuts + [budget - parts]:
            sizes.append(c - prev + 1)
            prev = c
        return sizes

    def not_elim(self, goal, ctx, budget):
        a = self.pick(ctx)
        b1, b2 = self.split(budget, 2)
        return Node("notE", (self.gen(Not(a), ctx, b1), self.gen(a, ctx, b2)), goal, (), None)

    def elim_on(self, hyp, goal, ctx, budget):
        l, f = hyp
        return self.elim(Leaf(l, f), f, goal, ctx, budget, major_cost=1)

    def elim_generated(self, goal, ctx, budget):
        major = self.formula(2)
        while not _eliminable(major, self.system):
            major = self.formula(2)
        parts = self.split(budget, 2)
        m = self.gen(major, ctx, parts[0])
        return self.elim(m, major, goal, ctx, parts[1] + 1, major_cost=0)

    def elim(self, m, f, goal, ctx, budget, major_cost):
        """An elimination with major premise ``m`` (a deduction of ``f``)."""
        budget = max(budget - major_cost, 1)
        if isinstance(f, And):
            i, j = self.fresh(), self.fresh()
            (b,) = self.split(budget, 1)
            body = self.gen(goal, ctx + ((i, f.left), (j, f.right)), b)
            return Node("andE", (m, body), goal, (((i, f.left),), ((j, f.right),)), None)
        if isinstance(f, Or):
            i, j = self.fresh(), self.fresh()
            b1, b2 = self.split(budget, 2)
            return Node("orE", (m, self.gen(goal, ctx + ((i, f.left),), b1),
                                self.gen(goal, ctx + ((j, f.right),), b2)),
                        goal, (((i, f.left),), ((j, f.right),)), None)
        if isinstance(f, Imp):
            j = self.fresh()
            b1, b2 = self.split(budget, 2)
            return Node("impE", (m, self.gen(f.left, ctx, b1), self.gen(goal, ctx + ((j, f.right),), b2)),
                        goal, (((j, f.right),),), None)
        if isinstance(f, Not):
            (b,) = self.split(budget, 1)
            return Node("notE", (m, self.gen(f.sub, ctx, b)), goal, (), None)
        if isinstance(f, Exists):
            e = self.fresh_eigen()
            inst = instantiate(f, Param(e))
            i = self.fresh()
            (b,) = self.split(budget, 1)
            return Node("exE", (m, self.gen(goal, ctx + ((i, inst),), b)), goal, (((i, inst),),), e)
        return self.leaf(goal, ctx)

    def intro(self, goal, ctx, budget):
        rng = self.rng
        rules = ["andI", "orIL", "orIR", "impI", "tr", "notI"]
        if self.system != "c":
            rules.append("exI")
        rule = rng.choice(rules)
        k = self.fresh()
        if rule == "andI":
            a, b = self.pick(ctx), self.pick(ctx)
            s1, s2, s3 = self.split(budget, 3)
            M = And(a, b)
            return Node("andI", (self.gen(a, ctx, s1), self.gen(b, ctx, s2),
                                 self.gen(goal, ctx + ((k, M),), s3)), goal, (((k, M),),), None)
        if rule in ("orIL", "orIR"):
            a, b = self.pick(ctx), self.pick(ctx)
            M = Or(a, b)
            s1, s2 = self.split(budget, 2)
            spec = a if rule == "orIL" else b
            return Node(rule, (self.gen(spec, ctx, s1), self.gen(goal, ctx + ((k, M),), s2)),
                        goal, (((k, M),),), None)
        if rule == "impI":
            a, b = self.formula(1), self.pick(ctx)
            M = Imp(a, b)
            s1, s2 = self.split(budget, 2)
            return Node("impI", (self.gen(b, ctx, s1), self.gen(goal, ctx + ((k, M),), s2)),
                        goal, (((k, M),),), None)
        if rule == "exI":
            body = Atom("F", (Var("x"),))
            M = Exists("x", body)
            t = Param(rng.choice(TERMS))
            s1, s2 = self.split(budget, 2)
            return Node("exI", (self.gen(instantiate(M, t), ctx, s1), self.gen(goal, ctx + ((k, M),), s2)),
                        goal, (((k, M),),), None)
        a = self.formula(1)
        i = self.fresh()
        s1, s2 = self.split(budget, 2)
        if rule == "tr":
            M = Imp(a, self.formula(1))
            return Node("tr", (self.gen(goal, ctx + ((i, a),), s1), self.gen(goal, ctx + ((k, M),), s2)),
                        goal, (((i, a),), ((k, M),)), None)
        M = Not(a)
        return Node("notI", (self.gen(goal, ctx + ((i, a),), s1), self.gen(goal, ctx + ((k, M),), s2)),
                    goal, (((i, a),), ((k, M),)), None)


def _eliminable(f, system) -> bool:
    if isinstance(f, Exists):
        return system != "c"
    return isinstance(f, (And, Or, Imp, Not))


def gen_deduction(seed: int, budget: int = 40, system: str = "cex", attempts: int = 40):
    """A check-valid deduction with at most ``budget`` nodes, determined by ``seed``.

    Vacuous discharges are pruned after generation, which often shrinks a tree
    a lot, so several attempts are drawn and the first reaching a third of the
    budget (or else the largest) is kept.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if system not in ("c", "cex"):
        raise ValueError("generation supports the systems c and cex")
    best = None
    for attempt in range(attempts):
        rng = random.Random("%d/%d/%s/%d" % (seed, budget, system, attempt))
        g = _Gen(rng, system)
        d = clean_vacuous(g.gen(g.formula(2), (), budget))
        n = size(d)
        if n > budget or not check(d, system).valid:
            continue
        if best is None or n > size(best):
            best = d
        if 3 * n >= budget:
            break
    return best if best is not None else Leaf(1, Atom("p"))


def gen_conventional(seed: int, budget: int = 40, system: str = "cex"):
    """A deduction in the conventional rules, obtained by translating a generated one."""
    return to_conventional(to_unique_discharge(gen_deduction(seed, budget, system)))


def corpus(n: int, budget: int = 40, system: str = "cex", start: int = 0) -> Iterator:
    for seed in range(start, start + n):
        yield gen_deduction(seed, budget, system)


# ------------------------------------------------------------ enumeration

def enumerate_normal_closed(goal: Formula, depth: int = 6, limit: Optional[int] = None) -> List:
    """Normal closed deductions of ``goal`` of height at most ``depth``.

    Backward search over the rule schemas in normal shape: eliminations only
    on assumptions not discharged as an introduction's major, every formula a
    subformula of the goal, and a formula already assumed is not assumed again.
    Deductions that differ only in which of several equal hypotheses they
    reuse are counted once.
    """
    return list(_Enum(goal, limit).run(depth))


class _Enum:
    def __init__(self, goal, limit):
        self.goal = goal
        self.limit = limit
        self.subs = sorted(set(subformulas(goal)), key=str)
        self.count = 0

    def run(self, depth):
        self.next_label = 0
        for d in self.prove(self.goal, (), depth):
            if clean_vacuous(d) != d:
                continue
            yield canonical(d)
            self.count += 1
            if self.limit is not None and self.count >= self.limit:
                return

    def prove(self, goal, ctx, depth) -> Iterator:
        """ctx: tuple of (label, formula, kind) with kind 'elim', 'minor' or 'major'."""
        if depth <= 0:
            return
        for l, f, kind in ctx:
            if f == goal:
                yield Leaf(l, f)
                break
        if depth <= 1:
            return
        known = {f for _, f, _ in ctx}
        self.next_label += 2
        nl = self.next_label - 1
        # eliminations whose major premise is an assumption
        for l, f, kind in ctx:
            if kind == "major":
                continue
            major = Leaf(l, f)
            if isinstance(f, And):
                for sel in ((True, False), (False, True), (True, True)):
                    groups, add, lab = [(), ()], [], nl
                    for idx, (side, use) in enumerate(zip((f.left, f.right), sel)):
                        if use and side not in known:
                            groups[idx] = ((lab, side),)
                            add.append((lab, side, "elim"))
                            lab += 1
                    if len(add) < sum(sel):
                        continue
                    for body in self.prove(goal, ctx + tuple(add), depth - 1):
                        yield Node("andE", (major, body), goal, tuple(groups), None)
            elif isinstance(f, Or):
                if f.left in known or f.right in known:
                    continue
                for b1 in self.prove(goal, ctx + ((nl, f.left, "elim"),), depth - 1):
                    for b2 in self.prove(goal, ctx + ((nl + 1, f.right, "elim"),), depth - 1):
                        yield Node("orE", (major, b1, b2), goal,
                                   (((nl, f.left),), ((nl + 1, f.right),)), None)
            elif isinstance(f, Imp):
                if f.right in known:
                    continue
                for m in self.prove(f.left, ctx, depth - 1):
                    for b in self.prove(goal, ctx + ((nl, f.right, "elim"),), depth - 1):
                        yield Node("impE", (major, m, b), goal, (((nl, f.right),),), None)
            elif isinstance(f, Not):
                for m in self.prove(f.sub, ctx, depth - 1):
                    yield Node("notE", (major, m), goal, (), None)
        # introductions, discharging a subformula of the goal as major
        for M in self.subs:
            if M in known:
                continue
            if isinstance(M, And):
                for s1 in self.prove(M.left, ctx, depth - 1):
                    for s2 in self.prove(M.right, ctx, depth - 1):
                        for b in self.prove(goal, ctx + ((nl, M, "major"),), depth - 1):
                            yield Node("andI", (s1, s2, b), goal, (((nl, M),),), None)
            elif isinstance(M, Or):
                for rule, side in (("orIL", M.left), ("orIR", M.right)):
                    for s in self.prove(side, ctx, depth - 1):
                        for b in self.prove(goal, ctx + ((nl, M, "major"),), depth - 1):
                            yield Node(rule, (s, b), goal, (((nl, M),),), None)
            elif isinstance(M, Imp):
                for s in self.prove(M.right, ctx, depth - 1):
                    for b in self.prove(goal, ctx + ((nl, M, "major"),), depth - 1):
                        yield Node("impI", (s, b), goal, (((nl, M),),), None)
                if M.left not in known:
                    ctx1 = ctx + ((nl, M.left, "minor"),)
                    for b1 in self.prove(goal, ctx1, depth - 1):
                        ctx2 = ctx + ((nl + 1, M, "major"),)
                        for b2 in self.prove(goal, ctx2, depth - 1):
                            yield Node("tr", (b1, b2), goal, (((nl, M.left),), ((nl + 1, M),)), None)
            elif isinstance(M, Not):
                if M.sub not in known:
                    for b1 in self.prove(goal, ctx + ((nl, M.sub, "minor"),), depth - 1):
                        for b2 in self.prove(goal, ctx + ((nl + 1, M, "major"),), depth - 1):
                            yield Node("notI", (b1, b2), goal, (((nl, M.sub),), ((nl + 1, M),)), None)

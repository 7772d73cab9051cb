"""Terms, formulas, substitution and the subformula relation.

Formulas are immutable trees.  Variables only ever appear under the binder
that introduces them; free names in term position are parameters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


class CaptureError(ValueError):
    """A substituted term would have one of its variables captured."""


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Param:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple

    def __str__(self):
        return "%s(%s)" % (self.name, ", ".join(str(a) for a in self.args))


Term = Union[Param, Var, Fn]


def term_params(t: Term) -> Iterator[str]:
    if isinstance(t, Param):
        yield t.name
    elif isinstance(t, Fn):
        for a in t.args:
            yield from term_params(a)


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Fn):
        for a in t.args:
            yield from term_vars(a)


# ------------------------------------------------------------- formulas

class Formula:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple = ()

    def __repr__(self):
        return "Atom(%r%s)" % (self.pred, ", %r" % (self.args,) if self.args else "")


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Imp)
QUANTIFIERS = (Exists, Forall)


def children(f: Formula) -> tuple:
    """Immediate subformulas (quantifier bodies are pseudo-formulas)."""
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def degree(f: Formula) -> int:
    """Number of connectives in ``f``; atoms have degree 0, ``Bot`` degree 1."""
    if isinstance(f, Atom):
        return 0
    return 1 + sum(degree(c) for c in children(f))


def is_atomic(f: Formula) -> bool:
    return isinstance(f, Atom)


def params(f: Formula) -> set:
    """Names of all parameters occurring in ``f``."""
    out = set()
    _collect_params(f, out)
    return out


def _collect_params(f, out):
    if isinstance(f, Atom):
        for t in f.args:
            out.update(term_params(t))
    else:
        for c in children(f):
            _collect_params(c, out)


def free_vars(f: Formula, bound: frozenset = frozenset()) -> set:
    if isinstance(f, Atom):
        return {v for t in f.args for v in term_vars(t) if v not in bound}
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body, bound | {f.var})
    out = set()
    for c in children(f):
        out |= free_vars(c, bound)
    return out


def rebuild(f: Formula, kids) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, kids[0])
    return f


# ---------------------------------------------------------- substitution

def _subst_term(t: Term, match, to: Term) -> Term:
    if match(t):
        return to
    if isinstance(t, Fn):
        return Fn(t.name, tuple(_subst_term(a, match, to) for a in t.args))
    return t


def subst_var(f: Formula, x: str, t: Term) -> Formula:
    """Replace the free occurrences of variable ``x`` in ``f`` by ``t``.

    Raises CaptureError if a variable of ``t`` would be bound by a binder
    of ``f`` at an occurrence of ``x``.
    """
    tvars = set(term_vars(t))
    return _subst_var(f, x, t, tvars)


def _subst_var(f, x, t, tvars):
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_subst_term(a, lambda s: s == Var(x), t) for a in f.args))
    if isinstance(f, QUANTIFIERS):
        if f.var == x:
            return f
        if f.var in tvars and x in free_vars(f.body):
            raise CaptureError("variable %s would be captured by the binder %s%s"
                               % (f.var, "∃" if isinstance(f, Exists) else "∀", f.var))
        return type(f)(f.var, _subst_var(f.body, x, t, tvars))
    return rebuild(f, [_subst_var(c, x, t, tvars) for c in children(f)])


def instantiate(q: Formula, t: Term) -> Formula:
    """The instance of the body of a quantified formula at ``t``."""
    return subst_var(q.body, q.var, t)


def subst_param_formula(f: Formula, a: str, t: Term) -> Formula:
    if isinstance(f, Atom):
        if not f.args:
            return f
        return Atom(f.pred, tuple(_subst_term(s, lambda s: s == Param(a), t) for s in f.args))
    return rebuild(f, [subst_param_formula(c, a, t) for c in children(f)])


def abstract_param(f: Formula, a: str, x: str) -> Formula:
    """Replace parameter ``a`` by variable ``x`` (``A^a_x``)."""
    return subst_param_formula(f, a, Var(x))


# -------------------------------------------------------------- matching

_UNBOUND = object()


def match_instance(body: Formula, x: str, target: Formula):
    """Find a term ``t`` with ``body[x := t] == target``.

    Returns ``(True, t)`` on success, where ``t`` is None when ``x`` does not
    occur free in ``body`` (every term works), and ``(False, None)`` otherwise.
    """
    env = {x: _UNBOUND}
    if not _match(body, target, env, frozenset()):
        return False, None
    t = env[x]
    return True, (None if t is _UNBOUND else t)


def _match(p, f, env, shadowed):
    if type(p) is not type(f):
        return False
    if isinstance(p, Atom):
        if p.pred != f.pred or len(p.args) != len(f.args):
            return False
        return all(_match_term(a, b, env, shadowed) for a, b in zip(p.args, f.args))
    if isinstance(p, QUANTIFIERS):
        if p.var != f.var:
            return False
        return _match(p.body, f.body, env, shadowed | {p.var})
    return all(_match(a, b, env, shadowed) for a, b in zip(children(p), children(f)))


def _match_term(a, b, env, shadowed):
    if isinstance(a, Var) and a.name in env and a.name not in shadowed:
        if any(v in shadowed for v in term_vars(b)):
            return False
        cur = env[a.name]
        if cur is _UNBOUND:
            env[a.name] = b
            return True
        return cur == b
    if isinstance(a, Fn):
        return (isinstance(b, Fn) and a.name == b.name and len(a.args) == len(b.args)
                and all(_match_term(x, y, env, shadowed) for x, y in zip(a.args, b.args)))
    return a == b


def is_instance(body: Formula, x: str, target: Formula) -> bool:
    return match_instance(body, x, target)[0]


# ----------------------------------------------------------- subformulas

def is_subformula(f: Formula, g: Formula) -> bool:
    """True iff ``f`` is a subformula of ``g``.

    Every substitution instance of the body of a quantified subformula counts
    as a subformula; instances are found by matching, the opened variables
    acting as pattern variables.
    """
    return _sub(f, g, frozenset())


def _sub(f, g, opened):
    if _match_open(g, f, opened):
        return True
    if isinstance(g, QUANTIFIERS):
        # an inner binder of the same name shadows the outer pattern variable
        return _sub(f, g.body, opened | {g.var})
    return any(_sub(f, c, opened) for c in children(g))


def _match_open(pattern, f, opened):
    if not opened:
        return pattern == f
    env = {name: _UNBOUND for name in opened}
    return _match(pattern, f, env, frozenset())


# ------------------------------------------------------------- printing

def pretty(f: Formula) -> str:
    """Infix rendering with the usual logical symbols."""
    return _pretty(f, SYMBOLS_UNICODE)


def pretty_ascii(f: Formula) -> str:
    return _pretty(f, SYMBOLS_ASCII)


SYMBOLS_UNICODE = {"not": "¬", "and": " ∧ ", "or": " ∨ ", "imp": " ⊃ ",
                   "ex": "∃", "all": "∀", "bot": "⊥"}
SYMBOLS_ASCII = {"not": "~", "and": " & ", "or": " v ", "imp": " -> ",
                 "ex": "E", "all": "A", "bot": "_|_"}


def _pretty(f, sym, top=True):
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return "%s(%s)" % (f.pred, ", ".join(str(a) for a in f.args))
    if isinstance(f, Bot):
        return sym["bot"]
    if isinstance(f, Not):
        return sym["not"] + _pretty(f.sub, sym, False)
    if isinstance(f, QUANTIFIERS):
        q = sym["ex"] if isinstance(f, Exists) else sym["all"]
        return "%s%s %s" % (q, f.var, _pretty(f.body, sym, False))
    op = {And: "and", Or: "or", Imp: "imp"}[type(f)]
    s = _pretty(f.left, sym, False) + sym[op] + _pretty(f.right, sym, False)
    return s if top else "(" + s + ")"


def subformulas(f: Formula) -> Iterator[Formula]:
    """Syntactic subformulas of a closed formula (no quantifier instances)."""
    yield f
    for c in children(f):
        yield from subformulas(c)


__all__ = [
    "Param", "Var", "Fn", "Term", "Formula", "Atom", "Bot", "Not", "And", "Or",
    "Imp", "Exists", "Forall", "CaptureError", "degree", "subst_var",
    "subst_param_formula", "abstract_param", "instantiate", "match_instance",
    "is_instance", "is_subformula", "params", "free_vars", "pretty",
    "pretty_ascii", "children", "is_atomic", "subformulas",
]

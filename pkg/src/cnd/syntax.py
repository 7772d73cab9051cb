"""Reading and writing formulas and deductions.

The text format is a prefix s-expression language::

    formula   := (at NAME term*) | (bot) | (not f) | (and f f) | (or f f)
               | (imp f f) | (ex NAME f) | (all NAME f)
    term      := NAME | (fn NAME term+)
    deduction := (assume INT formula)
               | (RULE deduction* (dis (INT formula)*)* (concl formula)? (eigen NAME)?)

A NAME in term position bound by an enclosing ``ex``/``all`` is a variable,
otherwise a parameter.  ``;`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

from .deduction import RULES, Leaf, Node, default_conclusion, walk
from .logic import (
    And, Atom, Bot, Exists, Forall, Fn, Formula, Imp, Not, Or, Param, Var,
    pretty, pretty_ascii,
)

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
INT_RE = re.compile(r"[0-9]+\Z")
MAX_NESTING = 256   # keeps every recursive consumer well inside the interpreter's stack


@dataclass(frozen=True)
class SourceSpan:
    begin: int          # byte offsets, end exclusive
    end: int
    line: int           # 1-based
    col: int            # 1-based, in bytes

    def __str__(self):
        return "%d:%d" % (self.line, self.col)


class ParseError(ValueError):
    def __init__(self, msg: str, span: SourceSpan):
        super().__init__("%s: %s" % (span, msg))
        self.msg = msg
        self.span = span


# ------------------------------------------------------------------ reader

@dataclass
class _Atom:
    text: str
    span: SourceSpan


@dataclass
class _List:
    items: list
    span: SourceSpan


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.line = 1
        self.line_start = 0

    def span(self, begin, end=None, line=None, col=None):
        return SourceSpan(begin, self.pos if end is None else end,
                          self.line if line is None else line,
                          (begin - self.line_start + 1) if col is None else col)

    def skip(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos]
            if c == 0x0A:
                self.pos += 1
                self.line += 1
                self.line_start = self.pos
            elif c in b" \t\r\f\v":
                self.pos += 1
            elif c == 0x3B:  # ';'
                while self.pos < len(data) and data[self.pos] != 0x0A:
                    self.pos += 1
            else:
                break

    def read(self, depth=0):
        self.skip()
        if self.pos >= len(self.data):
            raise ParseError("unexpected end of input", self.span(self.pos))
        begin, line, col = self.pos, self.line, self.pos - self.line_start + 1
        c = self.data[self.pos]
        if c == 0x28:  # '('
            if depth >= MAX_NESTING:
                raise ParseError("nesting deeper than %d levels" % MAX_NESTING,
                                 SourceSpan(begin, begin + 1, line, col))
            self.pos += 1
            items = []
            while True:
                self.skip()
                if self.pos >= len(self.data):
                    raise ParseError("unclosed parenthesis", SourceSpan(begin, begin + 1, line, col))
                if self.data[self.pos] == 0x29:
                    self.pos += 1
                    return _List(items, SourceSpan(begin, self.pos, line, col))
                items.append(self.read(depth + 1))
        if c == 0x29:
            raise ParseError("unexpected ')'", self.span(begin, begin + 1))
        while self.pos < len(self.data) and self.data[self.pos] not in b"() \t\r\n\f\v;":
            self.pos += 1
        raw = self.data[begin:self.pos]
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("invalid UTF-8 in token", SourceSpan(begin, self.pos, line, col))
        return _Atom(text, SourceSpan(begin, self.pos, line, col))


def _read_one(text: Union[str, bytes]):
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    r = _Reader(data)
    form = r.read()
    r.skip()
    if r.pos < len(data):
        raise ParseError("trailing input after the expression", r.span(r.pos, r.pos + 1))
    return form


# ------------------------------------------------------------------ formulas

def _head(x, what):
    if not isinstance(x, _List) or not x.items or not isinstance(x.items[0], _Atom):
        raise ParseError("expected %s" % what, x.span)
    return x.items[0].text


def _name(x, what="a name"):
    if not isinstance(x, _Atom) or not NAME_RE.match(x.text):
        raise ParseError("expected %s" % what, x.span)
    return x.text


def _arity(x, n, what):
    if len(x.items) != n + 1:
        raise ParseError("%s takes %d argument%s" % (what, n, "" if n == 1 else "s"), x.span)


def _term(x, bound):
    if isinstance(x, _Atom):
        n = _name(x, "a term")
        return Var(n) if n in bound else Param(n)
    if _head(x, "a term") != "fn":
        raise ParseError("expected a term: NAME or (fn NAME term+)", x.span)
    if len(x.items) < 3:
        raise ParseError("fn needs a name and at least one argument", x.span)
    return Fn(_name(x.items[1], "a function name"), tuple(_term(a, bound) for a in x.items[2:]))


def _formula(x, bound=frozenset()) -> Formula:
    h = _head(x, "a formula")
    if h == "at":
        if len(x.items) < 2:
            raise ParseError("at needs a predicate name", x.span)
        return Atom(_name(x.items[1], "a predicate name"), tuple(_term(a, bound) for a in x.items[2:]))
    if h == "bot":
        _arity(x, 0, "bot")
        return Bot()
    if h == "not":
        _arity(x, 1, "not")
        return Not(_formula(x.items[1], bound))
    if h in ("and", "or", "imp"):
        _arity(x, 2, h)
        cls = {"and": And, "or": Or, "imp": Imp}[h]
        return cls(_formula(x.items[1], bound), _formula(x.items[2], bound))
    if h in ("ex", "all"):
        _arity(x, 2, h)
        v = _name(x.items[1], "a bound variable")
        cls = Exists if h == "ex" else Forall
        return cls(v, _formula(x.items[2], bound | {v}))
    raise ParseError("unknown formula constructor %r" % h, x.span)


def parse_formula(text) -> Formula:
    return _formula(_read_one(text))


# ---------------------------------------------------------------- deductions

def _label(x):
    if not isinstance(x, _Atom) or not INT_RE.match(x.text) or int(x.text) < 1:
        raise ParseError("expected a positive integer label", x.span)
    return int(x.text)


def _deduction(x, path=(), spans=None):
    if spans is not None:
        spans[path] = x.span
    h = _head(x, "a deduction")
    if h == "assume":
        _arity(x, 2, "assume")
        return Leaf(_label(x.items[1]), _formula(x.items[2]))
    if h not in RULES:
        raise ParseError("unknown rule %r" % h, x.items[0].span)
    spec = RULES[h]
    premises, groups = [], []
    concl: Optional[Formula] = None
    eigen: Optional[str] = None
    stage = 0  # 0 premises, 1 dis, 2 concl, 3 eigen
    for item in x.items[1:]:
        kind = _head(item, "a premise, (dis ...), (concl ...) or (eigen ...)")
        if kind == "dis":
            if stage > 1:
                raise ParseError("(dis ...) must precede (concl ...) and (eigen ...)", item.span)
            stage = 1
            grp = []
            for pair in item.items[1:]:
                if not isinstance(pair, _List) or len(pair.items) != 2:
                    raise ParseError("expected (LABEL formula)", pair.span)
                grp.append((_label(pair.items[0]), _formula(pair.items[1])))
            groups.append(tuple(sorted(grp, key=lambda lf: lf[0])))
        elif kind == "concl":
            if stage > 1:
                raise ParseError("duplicate or misplaced (concl ...)", item.span)
            stage = 2
            _arity(item, 1, "concl")
            concl = _formula(item.items[1])
        elif kind == "eigen":
            if stage > 2:
                raise ParseError("duplicate (eigen ...)", item.span)
            stage = 3
            _arity(item, 1, "eigen")
            eigen = _name(item.items[1], "an eigenparameter name")
        else:
            if stage > 0:
                raise ParseError("premises must come before (dis ...), (concl ...) and (eigen ...)",
                                 item.span)
            premises.append(_deduction(item, path + (len(premises),), spans))
    if len(groups) > len(spec.slots):
        raise ParseError("%s has %d discharge slot%s, got %d (dis ...) groups"
                         % (h, len(spec.slots), "" if len(spec.slots) == 1 else "s", len(groups)),
                         x.span)
    groups += [()] * (len(spec.slots) - len(groups))
    if concl is None:
        concl = default_conclusion(h, premises)
        if concl is None:
            raise ParseError("%s needs an explicit (concl ...)" % h, x.span)
    return Node(h, tuple(premises), concl, tuple(groups), eigen)


def parse_deduction(text):
    return _deduction(_read_one(text))


def parse_with_spans(text):
    """Parse a deduction and also return the source span of every subtree, keyed by path."""
    spans: Dict[tuple, SourceSpan] = {}
    return _deduction(_read_one(text), (), spans), spans


# ----------------------------------------------------------------- renderers

def term_sexpr(t) -> str:
    if isinstance(t, Fn):
        return "(fn %s %s)" % (t.name, " ".join(term_sexpr(a) for a in t.args))
    return t.name


def formula_sexpr(f: Formula) -> str:
    if isinstance(f, Atom):
        return "(at %s)" % " ".join([f.pred] + [term_sexpr(a) for a in f.args])
    if isinstance(f, Bot):
        return "(bot)"
    if isinstance(f, Not):
        return "(not %s)" % formula_sexpr(f.sub)
    if isinstance(f, (Exists, Forall)):
        return "(%s %s %s)" % ("ex" if isinstance(f, Exists) else "all", f.var, formula_sexpr(f.body))
    op = {And: "and", Or: "or", Imp: "imp"}[type(f)]
    return "(%s %s %s)" % (op, formula_sexpr(f.left), formula_sexpr(f.right))


def _sexpr(d) -> str:
    if isinstance(d, Leaf):
        return "(assume %d %s)" % (d.label, formula_sexpr(d.formula))
    parts = [d.rule] + [_sexpr(p) for p in d.premises]
    for grp in d.discharges:
        parts.append("(%s)" % " ".join(["dis"] + ["(%d %s)" % (l, formula_sexpr(f))
                                               for l, f in sorted(grp, key=lambda lf: lf[0])]))
    if RULES[d.rule].free_conclusion or d.conclusion != default_conclusion(d.rule, d.premises):
        parts.append("(concl %s)" % formula_sexpr(d.conclusion))
    if d.eigen is not None:
        parts.append("(eigen %s)" % d.eigen)
    return "(%s)" % " ".join(parts)


def render_sexpr(d) -> str:
    """Canonical single-line form, newline terminated."""
    return _sexpr(d) + "\n"


def _discharged(d) -> set:
    out = set()
    for _, t in walk(d):
        if isinstance(t, Node):
            out |= t.all_discharged()
    return out


def render_ascii(d) -> str:
    """Outline drawing: each conclusion above its premises, discharged
    assumptions in brackets with their class label as superscript."""
    closed = _discharged(d)
    lines: List[str] = []

    def go(t, prefix, last, top):
        joint = "" if top else ("`-- " if last else "|-- ")
        if isinstance(t, Leaf):
            f = pretty_ascii(t.formula)
            text = ("[%s]^%d" % (f, t.label)) if t.label in closed else "%s^%d" % (f, t.label)
        else:
            labs = sorted(t.all_discharged())
            text = "%s    by %s" % (pretty_ascii(t.conclusion), t.rule)
            if labs:
                text += " /%s" % ",".join(map(str, labs))
            if t.eigen:
                text += " eigen %s" % t.eigen
        lines.append(prefix + joint + text)
        if isinstance(t, Node):
            ext = "" if top else ("    " if last else "|   ")
            for i, p in enumerate(t.premises):
                go(p, prefix + ext, i == len(t.premises) - 1, False)

    go(d, "", True, True)
    return "\n".join(lines) + "\n"


LATEX_RULE = {
    "andI": r"\land I", "andE": r"\land E", "orIL": r"\lor I", "orIR": r"\lor I",
    "orE": r"\lor E", "impI": r"\supset I", "tr": r"TR", "impE": r"\supset E",
    "notI": r"\neg I", "notE": r"\neg E", "exI": r"\exists I", "exE": r"\exists E",
    "allI": r"\forall I", "allE": r"\forall E", "botE": r"\bot E",
    "cAndI": r"\land I", "cOrIL": r"\lor I", "cOrIR": r"\lor I", "cImpI": r"\supset I",
    "cExI": r"\exists I",
}
LATEX_SYMBOLS = {"not": r"\neg ", "and": r" \land ", "or": r" \lor ", "imp": r" \supset ",
                 "ex": r"\exists ", "all": r"\forall ", "bot": r"\bot"}
INF = {0: r"\AxiomC{}", 1: r"\UnaryInfC", 2: r"\BinaryInfC", 3: r"\TrinaryInfC"}


def latex_formula(f: Formula) -> str:
    from .logic import _pretty
    return _pretty(f, LATEX_SYMBOLS)


def render_latex(d) -> str:
    """bussproofs markup for a ``prooftree`` environment."""
    closed = _discharged(d)
    out = [r"\begin{prooftree}"]

    def go(t):
        if isinstance(t, Leaf):
            f = latex_formula(t.formula)
            if t.label in closed:
                body = "[%s]^{%d}" % (f, t.label)
            elif isinstance(t.formula, (Atom, Bot)):
                body = "%s^{%d}" % (f, t.label)
            else:
                body = "(%s)^{%d}" % (f, t.label)
            out.append(r"\AxiomC{$%s$}" % body)
            return
        for p in t.premises:
            go(p)
        if not t.premises:
            out.append(r"\AxiomC{}")
        labs = sorted(t.all_discharged())
        label = LATEX_RULE[t.rule]
        if labs:
            label += "_{%s}" % ", ".join(map(str, labs))
        out.append(r"\RightLabel{$\scriptstyle %s$}" % label)
        n = max(1, len(t.premises))
        cmd = INF.get(n, r"\TrinaryInfC")
        out.append(r"%s{$%s$}" % (cmd, latex_formula(t.conclusion)))

    go(d)
    out.append(r"\end{prooftree}")
    return "\n".join(out) + "\n"


def render(d, fmt: str = "sexpr") -> str:
    if fmt == "sexpr":
        return render_sexpr(d)
    if fmt == "ascii":
        return render_ascii(d)
    if fmt == "latex":
        return render_latex(d)
    raise ValueError("unknown format %r (expected sexpr, ascii or latex)" % fmt)


def render_formula(f: Formula, fmt: str = "sexpr") -> str:
    return {"sexpr": formula_sexpr, "ascii": pretty_ascii, "latex": latex_formula,
            "unicode": pretty}[fmt](f)


__all__ = ["ParseError", "SourceSpan", "parse_formula", "parse_deduction", "parse_with_spans", "render",
           "render_sexpr", "render_ascii", "render_latex", "formula_sexpr", "render_formula"]

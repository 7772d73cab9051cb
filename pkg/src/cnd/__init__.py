"""Checker, analyzer and normalizer for classical natural deduction with
general introduction and elimination rules."""
from .logic import (
    And, Atom, Bot, CaptureError, Exists, Fn, Forall, Formula, Imp, Not, Or, Param, Var,
    degree, instantiate, is_subformula, pretty, subst_var,
)
from .deduction import (
    CheckReport, Leaf, Node, RULES, canonical, check, fresh_label, fresh_param, node,
    open_assumptions, open_formulas, size,
)
from .analysis import (
    Branch, Rank, Segment, branches, ei_split, is_normal, maximal_formulas,
    maximal_segments, rank, segments, subformula_audit,
)
from .transform import (
    clean_vacuous, collapse_unique_discharge, from_conventional, subst_param,
    to_conventional, to_unique_discharge,
)
from .reduce import (
    ForallUnsupported, build_xi_star, normalize, permute, reduce_and, reduce_ex,
    reduce_impI, reduce_not, reduce_or, reduce_tr,
)
from .syntax import ParseError, parse_deduction, parse_formula, render
from .generator import enumerate_normal_closed, gen_conventional, gen_deduction

__version__ = "0.1.0"

__all__ = [
    "And", "Atom", "Bot", "CaptureError", "Exists", "Fn", "Forall", "Formula", "Imp",
    "Not", "Or", "Param", "Var", "degree", "instantiate", "is_subformula", "pretty",
    "subst_var", "CheckReport", "Leaf", "Node", "RULES", "canonical", "check",
    "fresh_label", "fresh_param", "node", "open_assumptions", "open_formulas", "size",
    "Branch", "Rank", "Segment", "branches", "ei_split", "is_normal", "maximal_formulas",
    "maximal_segments", "rank", "segments", "subformula_audit", "clean_vacuous",
    "collapse_unique_discharge", "from_conventional", "subst_param", "to_conventional",
    "to_unique_discharge", "ForallUnsupported", "build_xi_star", "normalize", "permute",
    "reduce_and", "reduce_ex", "reduce_impI", "reduce_not", "reduce_or", "reduce_tr",
    "ParseError", "parse_deduction", "parse_formula", "render", "enumerate_normal_closed",
    "gen_conventional", "gen_deduction",
]

"""Positive-form quantified LTL: syntax, parsing, macros, desugaring, scoping."""

from .parser import context_text, parse_context, parse_formula, parse_term, tokenize
from .scope import scope_check
from .syntax import *  # noqa: F401,F403
from .syntax import FormulaInContext, to_text
from .transform import builtin_predicates, desugar, desugar_in_context, expand_macros


def prepare(text, fo, so, sig, expand_eq=False):
    """Parse, expand macros, scope-check and desugar a formula in one go."""
    body = parse_formula(text, sig) if isinstance(text, str) else text
    body = expand_macros(body, fo, so, sig)
    fc = scope_check(FormulaInContext(tuple(fo), tuple(so), body), sig)
    return desugar_in_context(fc, expand_eq)

"""Macro expansion and desugaring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import MacroArityMismatch, UnknownMacro
from ..sigterm import App, Context, Signature, Term, Var, typecheck_term
from .syntax import (
    FF, TT, Always, And, BINARY, BINDERS, Eq, Eventually, ExistsFO, ExistsSO, ForallSO,
    Formula, FormulaInContext, FO_BINDERS, Macro, Mem, NegAtom, Neq, Next, Or, Until,
    WNext, WUntil, fresh_name, names_in,
)


@dataclass(frozen=True)
class MacroDef:
    name: str
    arity: int
    # (args, arg sorts, fresh-name supply) -> formula
    expand: Callable[[tuple[Term, ...], tuple[str, ...], Callable[[str], str]], Formula]


def _present(args, sorts, fresh):
    y = fresh("y")
    return ExistsFO(y, sorts[0], Eq(args[0], Var(y)))


def _loop(args, sorts, fresh):
    return Eq(App("s", args), App("t", args))


def _preserved(args, sorts, fresh):
    return And(_present(args, sorts, fresh), Next(_present(args, sorts, fresh)))


def _deallocated(args, sorts, fresh):
    return And(_present(args, sorts, fresh), WNext(FF()))


def _has_graph_maps(sig: Signature) -> bool:
    s, t = sig.function("s"), sig.function("t")
    return (s is not None and t is not None and len(s.arg_sorts) == 1
            and s.arg_sorts == t.arg_sorts and s.result_sort == t.result_sort)


def builtin_predicates(sig: Signature) -> dict[str, MacroDef]:
    table = {
        "present": MacroDef("present", 1, _present),
        "nextStepPreserved": MacroDef("nextStepPreserved", 1, _preserved),
        "nextStepDeallocated": MacroDef("nextStepDeallocated", 1, _deallocated),
    }
    if _has_graph_maps(sig):
        table["loop"] = MacroDef("loop", 1, _loop)
    return table


def expand_macros(f: Formula, fo: Context, so: Context, sig: Signature) -> Formula:
    """Replace every macro call by its definition.

    Argument sorts are resolved against the binders in scope, so the
    first-order context must be known.
    """
    table = builtin_predicates(sig)
    taken = names_in(f) | {x for x, _ in fo} | {x for x, _ in so}

    def fresh(base):
        name = fresh_name(base, taken)
        taken.add(name)
        return name

    def go(g: Formula, ctx: Context) -> Formula:
        if isinstance(g, Macro):
            mdef = table.get(g.name)
            if mdef is None:
                raise UnknownMacro(f"macro {g.name!r} is not available for this signature")
            if len(g.args) != mdef.arity:
                raise MacroArityMismatch(
                    f"{g.name} takes {mdef.arity} argument(s), got {len(g.args)}")
            sorts = tuple(typecheck_term(a, ctx, sig) for a in g.args)
            return mdef.expand(g.args, sorts, fresh)
        if isinstance(g, BINARY):
            return type(g)(go(g.left, ctx), go(g.right, ctx))
        if isinstance(g, FO_BINDERS):
            return type(g)(g.var, g.sort, go(g.body, ctx + ((g.var, g.sort),)))
        if isinstance(g, BINDERS):
            return type(g)(g.var, g.sort, go(g.body, ctx))
        if isinstance(g, (NegAtom, Next, WNext, Eventually, Always)):
            return type(g)(go(g.body, ctx))
        return g

    return go(f, tuple(fo))


def desugar(f: Formula, expand_eq: bool = False, reserved: set[str] | frozenset = frozenset()) -> Formula:
    """Remove ``Eventually``/``Always``; with ``expand_eq`` also ``Eq``/``Neq``.

    Equality expansion needs sort-annotated ``Eq``/``Neq`` nodes, as produced
    by :func:`cqtl.logic.scope.scope_check`.  ``Neq`` stays primitive unless
    ``expand_eq`` is set.
    """
    taken = set(names_in(f)) | set(reserved)

    def go(g: Formula) -> Formula:
        match g:
            case Eventually(body):
                return Until(TT(), go(body))
            case Always(body):
                return WUntil(go(body), FF())
            case Eq(l, r, sort) if expand_eq:
                chi = _fresh_so(sort)
                return ForallSO(chi, sort, Or(And(Mem(l, chi), Mem(r, chi)),
                                              And(NegAtom(Mem(l, chi)), NegAtom(Mem(r, chi)))))
            case Neq(l, r, sort) if expand_eq:
                chi = _fresh_so(sort)
                return ExistsSO(chi, sort, And(Mem(l, chi), NegAtom(Mem(r, chi))))
            case Macro():
                raise UnknownMacro(f"macro {g.name!r} must be expanded before desugaring")
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, BINDERS):
            return type(g)(g.var, g.sort, go(g.body))
        if isinstance(g, (Next, WNext)):
            return type(g)(go(g.body))
        return g

    def _fresh_so(sort):
        if sort is None:
            raise ValueError("equality must be sort-annotated before expansion")
        name = fresh_name("chi", taken)
        taken.add(name)
        return name

    return go(f)


def desugar_in_context(fc: FormulaInContext, expand_eq: bool = False) -> FormulaInContext:
    reserved = {x for x, _ in fc.fo} | {x for x, _ in fc.so}
    return FormulaInContext(fc.fo, fc.so, desugar(fc.body, expand_eq, reserved))

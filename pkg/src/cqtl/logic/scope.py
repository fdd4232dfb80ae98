"""Scope and sort checking of formulas-in-context."""

from __future__ import annotations

from ..errors import DuplicateBinder, SortMismatch, UnboundVariable, UnknownMacro, UnknownSortReference
from ..sigterm import Context, Signature, check_context, lookup, typecheck_term
from .syntax import (
    BINARY, Eq, FO_BINDERS, Formula, FormulaInContext, Macro, Mem, Neq, SO_BINDERS,
)


def scope_check(fc: FormulaInContext, sig: Signature) -> FormulaInContext:
    """Check ``fc`` and return it with every equality annotated by its sort.

    An inner binder shadows an outer one of the same order.  First- and
    second-order names share one namespace, so reusing a name across orders
    raises :class:`DuplicateBinder`.
    """
    check_context(fc.fo, sig)
    check_context(fc.so, sig)
    clash = {x for x, _ in fc.fo} & {x for x, _ in fc.so}
    if clash:
        raise DuplicateBinder(f"{sorted(clash)} declared both first- and second-order")
    return FormulaInContext(fc.fo, fc.so, _check(fc.body, tuple(fc.fo), tuple(fc.so), sig))


def _check(f: Formula, fo: Context, so: Context, sig: Signature) -> Formula:
    match f:
        case Mem(term, var):
            want = lookup(so, var)
            if want is None:
                raise UnboundVariable(f"second-order variable {var!r} is not in scope")
            got = typecheck_term(term, fo, sig)
            if got != want:
                raise SortMismatch(f"{term} has sort {got} but {var} ranges over sets of {want}")
            return f
        case Eq(l, r, _) | Neq(l, r, _):
            ls, rs = typecheck_term(l, fo, sig), typecheck_term(r, fo, sig)
            if ls != rs:
                raise SortMismatch(f"cannot compare {l} of sort {ls} with {r} of sort {rs}")
            return type(f)(l, r, ls)
        case Macro(name, _):
            raise UnknownMacro(f"macro {name!r} must be expanded before scope checking")
    if isinstance(f, BINARY):
        return type(f)(_check(f.left, fo, so, sig), _check(f.right, fo, so, sig))
    if isinstance(f, FO_BINDERS + SO_BINDERS):
        if not sig.has_sort(f.sort):
            raise UnknownSortReference(f"binder {f.var!r} has unknown sort {f.sort!r}")
        first = isinstance(f, FO_BINDERS)
        other = so if first else fo
        if lookup(other, f.var) is not None:
            raise DuplicateBinder(f"{f.var!r} is already bound with the other order")
        if first:
            fo = fo + ((f.var, f.sort),)
        else:
            so = so + ((f.var, f.sort),)
        return type(f)(f.var, f.sort, _check(f.body, fo, so, sig))
    if hasattr(f, "body"):
        return type(f)(_check(f.body, fo, so, sig))
    return f

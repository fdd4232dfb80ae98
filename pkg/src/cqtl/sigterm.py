"""Many-sorted signatures, terms-in-context, typing and substitution.

Sorts are plain identifiers.  A context is an ordered tuple of
``(variable, sort)`` pairs; second-order contexts use the same shape, the
variable then ranging over subsets of the sort's carrier.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import (
    ArityMismatch,
    DuplicateBinder,
    DuplicateFunction,
    DuplicateSort,
    MissingBinding,
    SortMismatch,
    UnboundVariable,
    UnknownSortReference,
)

Sort = str
Context = tuple[tuple[str, Sort], ...]

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    arg_sorts: tuple[Sort, ...]
    result_sort: Sort

    def __str__(self):
        return f"{self.name} : {', '.join(self.arg_sorts)} -> {self.result_sort}"


@dataclass(frozen=True)
class Signature:
    sorts: tuple[Sort, ...] = ()
    functions: tuple[FunctionSymbol, ...] = ()

    def function(self, name: str) -> FunctionSymbol | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def has_sort(self, sort: Sort) -> bool:
        return sort in self.sorts


def validate_signature(raw: Signature) -> Signature:
    """Return ``raw`` unchanged if sorts and symbols are unique and closed."""
    seen = set()
    for s in raw.sorts:
        if not IDENT.match(s):
            raise UnknownSortReference(f"invalid sort name {s!r}")
        if s in seen:
            raise DuplicateSort(f"sort {s!r} declared twice")
        seen.add(s)
    names = set()
    for f in raw.functions:
        if f.name in names:
            raise DuplicateFunction(f"function symbol {f.name!r} declared twice")
        names.add(f.name)
        for s in (*f.arg_sorts, f.result_sort):
            if s not in seen:
                raise UnknownSortReference(
                    f"function symbol {f.name!r} mentions undeclared sort {s!r}")
    return raw


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...] = ()

    def __str__(self):
        return f"{self.fn}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def lookup(ctx: Context, name: str) -> Sort | None:
    # later entries shadow earlier ones
    for var, sort in reversed(ctx):
        if var == name:
            return sort
    return None


def check_context(ctx: Context, sig: Signature) -> Context:
    names = set()
    for var, sort in ctx:
        if var in names:
            raise DuplicateBinder(f"variable {var!r} appears twice in context")
        if not sig.has_sort(sort):
            raise UnknownSortReference(f"context variable {var!r} has unknown sort {sort!r}")
        names.add(var)
    return ctx


def same_shape(a: Context, b: Context) -> bool:
    """Contexts are identified up to renaming: compare their sort lists."""
    return [s for _, s in a] == [s for _, s in b]


def typecheck_term(t: Term, ctx: Context, sig: Signature) -> Sort:
    match t:
        case Var(name):
            sort = lookup(ctx, name)
            if sort is None:
                raise UnboundVariable(f"variable {name!r} is not in context")
            return sort
        case App(fn, args):
            sym = sig.function(fn)
            if sym is None:
                raise UnboundVariable(f"unknown function symbol {fn!r}")
            if len(args) != len(sym.arg_sorts):
                raise ArityMismatch(
                    f"{fn} expects {len(sym.arg_sorts)} argument(s), got {len(args)}")
            for i, (arg, want) in enumerate(zip(args, sym.arg_sorts)):
                got = typecheck_term(arg, ctx, sig)
                if got != want:
                    raise SortMismatch(
                        f"argument {i + 1} of {fn} has sort {got}, expected {want}")
            return sym.result_sort
    raise TypeError(f"not a term: {t!r}")


def substitute(t: Term, subst: Mapping[str, Term], target_ctx: Context,
               sig: Signature, source_ctx: Context | None = None) -> Term:
    """Simultaneously replace variables of ``t`` by terms over ``target_ctx``.

    When ``source_ctx`` is given, each replacement is also checked to have the
    sort of the variable it replaces.
    """
    for name in term_vars(t):
        if name not in subst:
            raise MissingBinding(f"no replacement for variable {name!r}")
        got = typecheck_term(subst[name], target_ctx, sig)
        if source_ctx is not None:
            want = lookup(source_ctx, name)
            if want is not None and got != want:
                raise SortMismatch(
                    f"replacement for {name!r} has sort {got}, expected {want}")
    result = _subst(t, subst)
    typecheck_term(result, target_ctx, sig)
    return result


def _subst(t: Term, subst: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return subst[t.name]
    return App(t.fn, tuple(_subst(a, subst) for a in t.args))


def graph_signature() -> Signature:
    """Directed graphs: nodes, edges, and source/target maps."""
    return Signature(
        sorts=("node", "edge"),
        functions=(FunctionSymbol("s", ("edge",), "node"),
                   FunctionSymbol("t", ("edge",), "node")),
    )

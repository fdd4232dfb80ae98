"""Abstract syntax of positive-form quantified LTL, and a printer.

Negation lives only in the atom layer (``TT``, ``FF``, ``Mem`` and ``NegAtom``
over those).  ``Eventually``, ``Always``, ``Eq``, ``Neq`` and ``Macro`` are
sugar removed by :mod:`cqtl.logic.transform`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from ..sigterm import Context, Term, Var, term_vars


@dataclass(frozen=True)
class TT:
    pass


@dataclass(frozen=True)
class FF:
    pass


@dataclass(frozen=True)
class Mem:
    term: Term
    var: str


@dataclass(frozen=True)
class NegAtom:
    body: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ExistsFO:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class ForallFO:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSO:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSO:
    var: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Next:
    body: "Formula"


@dataclass(frozen=True)
class WNext:
    body: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class WUntil:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Eventually:
    body: "Formula"


@dataclass(frozen=True)
class Always:
    body: "Formula"


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term
    sort: str | None = None


@dataclass(frozen=True)
class Neq:
    left: Term
    right: Term
    sort: str | None = None


@dataclass(frozen=True)
class Macro:
    name: str
    args: tuple[Term, ...]


Formula = Union[TT, FF, Mem, NegAtom, Or, And, ExistsFO, ForallFO, ExistsSO, ForallSO,
                Next, WNext, Until, WUntil, Eventually, Always, Eq, Neq, Macro]

ATOMS = (TT, FF, Mem, NegAtom)
BINARY = (Or, And, Until, WUntil)
UNARY = (NegAtom, Next, WNext, Eventually, Always)
FO_BINDERS = (ExistsFO, ForallFO)
SO_BINDERS = (ExistsSO, ForallSO)
BINDERS = FO_BINDERS + SO_BINDERS


@dataclass(frozen=True)
class FormulaInContext:
    fo: Context
    so: Context
    body: Formula

    def __str__(self):
        fo = ", ".join(f"{x}:{s}" for x, s in self.fo)
        so = ", ".join(f"{x}:Set({s})" for x, s in self.so)
        return f"[{fo}; {so}] {to_text(self.body)}"


def is_atom(f: Formula) -> bool:
    if isinstance(f, NegAtom):
        return is_atom(f.body)
    return isinstance(f, (TT, FF, Mem))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY) or isinstance(f, BINDERS):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from subformulas(c)


def terms_of(f: Formula) -> tuple[Term, ...]:
    match f:
        case Mem(term, _):
            return (term,)
        case Eq(l, r, _) | Neq(l, r, _):
            return (l, r)
        case Macro(_, args):
            return args
    return ()


def names_in(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, bound or free."""
    out = set()
    for g in subformulas(f):
        for t in terms_of(g):
            out |= term_vars(t)
        if isinstance(g, Mem):
            out.add(g.var)
        if isinstance(g, BINDERS):
            out.add(g.var)
    return out


def fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


# -- printing ------------------------------------------------------------------
# Levels: 0 quantifier, 1 or, 2 and, 3 until, 4 unary, 5 atom.

def _level(f: Formula) -> int:
    if isinstance(f, BINDERS):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    if isinstance(f, (Until, WUntil)):
        return 3
    if isinstance(f, (NegAtom, Eventually, Always)):
        return 4
    return 5


def _wrap(f: Formula, need: int) -> str:
    s = to_text(f)
    return f"({s})" if _level(f) < need else s


def _term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"{t.fn}({', '.join(_term(a) for a in t.args)})"


_BINDER_KW = {ExistsFO: "exists", ForallFO: "forall", ExistsSO: "existsS", ForallSO: "forallS"}


def to_text(f: Formula) -> str:
    """Concrete syntax that parses back to an equal AST."""
    match f:
        case TT():
            return "true"
        case FF():
            return "false"
        case Mem(t, var):
            return f"{_term(t)} in {var}"
        case NegAtom(body):
            return f"not {_wrap(body, 4)}"
        case Or(l, r):
            return f"{_wrap(l, 1)} | {_wrap(r, 2)}"
        case And(l, r):
            return f"{_wrap(l, 2)} & {_wrap(r, 3)}"
        case Until(l, r):
            return f"{_wrap(l, 4)} U {_wrap(r, 3)}"
        case WUntil(l, r):
            return f"{_wrap(l, 4)} W {_wrap(r, 3)}"
        case Next(body):
            return f"X[{to_text(body)}]"
        case WNext(body):
            return f"WX[{to_text(body)}]"
        case Eventually(body):
            return f"<> {_wrap(body, 4)}"
        case Always(body):
            return f"[] {_wrap(body, 4)}"
        case Eq(l, r, _):
            return f"{_term(l)} = {_term(r)}"
        case Neq(l, r, _):
            return f"{_term(l)} != {_term(r)}"
        case Macro(name, args):
            return f"{name}({', '.join(_term(a) for a in args)})"
        case ExistsFO() | ForallFO() | ExistsSO() | ForallSO():
            return f"{_BINDER_KW[type(f)]} {f.var}:{f.sort}. {to_text(f.body)}"
    raise TypeError(f"not a formula: {f!r}")

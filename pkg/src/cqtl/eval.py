"""Fixpoint evaluation of formulas-in-context over counterpart models.

The value of a formula in a context is an *attribute*: for every world, the
set of assignments to the context variables that satisfy it.  Assignments are
tuples aligned with the context; first-order slots hold element names,
second-order slots hold frozensets of element names.

Temporal operators follow the counterpart reading: an assignment moves along
a transition componentwise, first-order values through the transition's
partial maps (the step is undefined if one of them has no counterpart) and
second-order values through the power-set lift.  ``U`` and ``W`` are the least
and greatest fixpoints of ``C -> B | (A & X C)``, computed by Kleene iteration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import ContextMismatch, StateSpaceCap, UnknownMacro
from .logic.syntax import (
    FF, TT, Always, And, Eq, Eventually, ExistsFO, ExistsSO, ForallFO, ForallSO, Formula,
    FormulaInContext, Macro, Mem, NegAtom, Neq, Next, Or, Until, WNext, WUntil,
)
from .model import CounterpartModel, Transition, lift_powerset, outgoing, step_relation
from .sigterm import App, Term, Var

DEFAULT_SO_CAP = 16


class Binding(NamedTuple):
    name: str
    sort: str
    second_order: bool = False


Ctx = tuple[Binding, ...]
Assignment = tuple


def context_of(fc: FormulaInContext) -> Ctx:
    return (tuple(Binding(x, s, False) for x, s in fc.fo)
            + tuple(Binding(x, s, True) for x, s in fc.so))


def extend(ctx: Ctx, b: Binding) -> tuple[Ctx, int | None]:
    """Append ``b``, dropping any binding it shadows; return the dropped index."""
    for k, old in enumerate(ctx):
        if old.name == b.name:
            return ctx[:k] + ctx[k + 1:] + (b,), k
    return ctx + (b,), None


@dataclass(frozen=True)
class Attribute:
    context: Ctx
    per_world: Mapping[str, frozenset]

    def __getitem__(self, world: str) -> frozenset:
        return self.per_world[world]

    def issubset(self, other: Attribute) -> bool:
        return all(self.per_world[w] <= other.per_world[w] for w in self.per_world)

    def assignments(self, world: str) -> list[dict]:
        """Readable assignments, sorted canonically."""
        rows = [_readable(self.context, a) for a in self.per_world[world]]
        names = sorted(b.name for b in self.context)
        return sorted(rows, key=lambda r: [_sort_key(r[n]) for n in names])

    def __str__(self):
        lines = []
        for w in self.per_world:
            rows = ["{" + ", ".join(f"{k}={_show(v)}" for k, v in r.items()) + "}"
                    for r in self.assignments(w)]
            lines.append(f"{w}: " + (", ".join(rows) if rows else "-"))
        return "\n".join(lines)


def _readable(ctx: Ctx, a: Assignment) -> dict:
    return {b.name: (sorted(v) if b.second_order else v) for b, v in zip(ctx, a)}


def _sort_key(v):
    return (1, tuple(v)) if isinstance(v, list) else (0, (v,))


def _show(v):
    return "{" + ",".join(v) + "}" if isinstance(v, list) else v


def _subsets(items) -> list[frozenset]:
    items = sorted(items)
    return [frozenset(c) for r in range(len(items) + 1)
            for c in itertools.combinations(items, r)]


class Evaluator:
    """Evaluates formulas over one model, memoising per (subformula, context)."""

    def __init__(self, model: CounterpartModel, so_cap: int = DEFAULT_SO_CAP):
        self.model = model
        self.so_cap = so_cap
        self.fixpoint_rounds = 0
        self._memo: dict = {}
        self._all: dict = {}
        self._terms: dict = {}
        self._steps: dict = {}
        self._outgoing = {w: outgoing(model, w) for w in model.worlds}

    # -- domains ---------------------------------------------------------------

    def all_assignments(self, world: str, ctx: Ctx) -> frozenset:
        key = (world, ctx)
        if key not in self._all:
            w = self.model.worlds[world]
            factors = []
            for b in ctx:
                carrier = w.carrier(b.sort)
                if b.second_order:
                    if len(carrier) > self.so_cap:
                        raise StateSpaceCap(
                            f"second-order variable {b.name!r} ranges over subsets of "
                            f"{len(carrier)} {b.sort} elements at {world}; cap is {self.so_cap}")
                    factors.append(_subsets(carrier))
                else:
                    factors.append(sorted(carrier))
            self._all[key] = frozenset(itertools.product(*factors))
        return self._all[key]

    def top(self, ctx: Ctx) -> Attribute:
        return Attribute(ctx, {w: self.all_assignments(w, ctx) for w in self.model.worlds})

    def bottom(self, ctx: Ctx) -> Attribute:
        return Attribute(ctx, {w: frozenset() for w in self.model.worlds})

    # -- terms -----------------------------------------------------------------

    def term_fn(self, t: Term, ctx: Ctx) -> Callable:
        """Compile ``t`` to a function of (world, assignment)."""
        key = (t, ctx)
        if key not in self._terms:
            self._terms[key] = self._compile(t, ctx)
        return self._terms[key]

    def _compile(self, t: Term, ctx: Ctx) -> Callable:
        if isinstance(t, Var):
            for i in range(len(ctx) - 1, -1, -1):
                if ctx[i].name == t.name and not ctx[i].second_order:
                    return lambda w, a, i=i: a[i]
            raise ContextMismatch(f"variable {t.name!r} is not a first-order variable of the context")
        args = [self._compile(a, ctx) for a in t.args]
        fn = t.fn
        return lambda w, a: w.tables[fn][tuple(g(w, a) for g in args)]

    # -- formulas --------------------------------------------------------------

    def evaluate(self, fc: FormulaInContext) -> Attribute:
        for _, sort in (*fc.fo, *fc.so):
            if not self.model.signature.has_sort(sort):
                raise ContextMismatch(f"context sort {sort!r} is not in the model's signature")
        return self.eval(fc.body, context_of(fc))

    def eval(self, f: Formula, ctx: Ctx) -> Attribute:
        key = (f, ctx)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = self._eval(f, ctx)
        return hit

    def _eval(self, f: Formula, ctx: Ctx) -> Attribute:
        worlds = self.model.worlds
        match f:
            case TT():
                return self.top(ctx)
            case FF():
                return self.bottom(ctx)
            case Mem(term, var):
                g = self.term_fn(term, ctx)
                i = _so_index(ctx, var)
                return self._filter(ctx, lambda w, a: g(w, a) in a[i])
            case NegAtom(body):
                inner = self.eval(body, ctx)
                return Attribute(ctx, {w: self.all_assignments(w, ctx) - inner[w] for w in worlds})
            case Or(l, r):
                a, b = self.eval(l, ctx), self.eval(r, ctx)
                return Attribute(ctx, {w: a[w] | b[w] for w in worlds})
            case And(l, r):
                a, b = self.eval(l, ctx), self.eval(r, ctx)
                return Attribute(ctx, {w: a[w] & b[w] for w in worlds})
            case Eq(l, r, _):
                g, h = self.term_fn(l, ctx), self.term_fn(r, ctx)
                return self._filter(ctx, lambda w, a: g(w, a) == h(w, a))
            case Neq(l, r, _):
                g, h = self.term_fn(l, ctx), self.term_fn(r, ctx)
                return self._filter(ctx, lambda w, a: g(w, a) != h(w, a))
            case ExistsFO() | ForallFO() | ExistsSO() | ForallSO():
                return self._quantify(f, ctx)
            case Next(body):
                return self.next_op(self.eval(body, ctx))
            case WNext(body):
                return self.wnext_op(self.eval(body, ctx))
            case Until(l, r):
                return self.until_op(self.eval(l, ctx), self.eval(r, ctx))
            case WUntil(l, r):
                return self.wuntil_op(self.eval(l, ctx), self.eval(r, ctx))
            case Eventually(body):
                return self.until_op(self.top(ctx), self.eval(body, ctx))
            case Always(body):
                return self.wuntil_op(self.eval(body, ctx), self.bottom(ctx))
            case Macro(name, _):
                raise UnknownMacro(f"macro {name!r} must be expanded before evaluation")
        raise TypeError(f"not a formula: {f!r}")

    def _filter(self, ctx: Ctx, pred) -> Attribute:
        out = {}
        for name, w in self.model.worlds.items():
            out[name] = frozenset(a for a in self.all_assignments(name, ctx) if pred(w, a))
        return Attribute(ctx, out)

    def _quantify(self, f, ctx: Ctx) -> Attribute:
        second = isinstance(f, (ExistsSO, ForallSO))
        universal = isinstance(f, (ForallFO, ForallSO))
        inner_ctx, dropped = extend(ctx, Binding(f.var, f.sort, second))
        inner = self.eval(f.body, inner_ctx)
        out = {}
        for name, w in self.model.worlds.items():
            carrier = w.carrier(f.sort)
            if second:
                if len(carrier) > self.so_cap:
                    raise StateSpaceCap(
                        f"quantifier over subsets of {len(carrier)} {f.sort} elements at "
                        f"{name}; cap is {self.so_cap}")
                values = _subsets(carrier)
            else:
                values = sorted(carrier)
            sat = inner[name]
            test = all if universal else any
            keep = []
            for a in self.all_assignments(name, ctx):
                base = a if dropped is None else a[:dropped] + a[dropped + 1:]
                if test(base + (v,) in sat for v in values):
                    keep.append(a)
            out[name] = frozenset(keep)
        return Attribute(ctx, out)

    # -- temporal operators ------------------------------------------------------

    def step_table(self, t: Transition, ctx: Ctx) -> dict:
        """Where each source assignment goes along ``t``; ``None`` if it has no counterpart."""
        key = (t.name, ctx)
        if key not in self._steps:
            movers = []
            for b in ctx:
                rel = step_relation(t, b.sort, self.model)
                if b.second_order:
                    movers.append(lift_powerset(rel))
                else:
                    movers.append(rel.converse().get)
            table = {}
            for a in self.all_assignments(t.source, ctx):
                moved = tuple(mv(v) for mv, v in zip(movers, a))
                table[a] = None if None in moved else moved
            self._steps[key] = table
        return self._steps[key]

    def _steps_from(self, world: str, ctx: Ctx):
        return [(t.target, self.step_table(t, ctx)) for t in self._outgoing[world]]

    def next_op(self, a: Attribute) -> Attribute:
        """Every transition gives a counterpart, and that counterpart satisfies ``a``."""
        ctx = a.context
        out = {}
        for w in self.model.worlds:
            steps = self._steps_from(w, ctx)
            out[w] = frozenset(
                s for s in self.all_assignments(w, ctx)
                if all((z := tab[s]) is not None and z in a[tgt] for tgt, tab in steps))
        return Attribute(ctx, out)

    def wnext_op(self, a: Attribute) -> Attribute:
        """Every counterpart that exists satisfies ``a``."""
        ctx = a.context
        out = {}
        for w in self.model.worlds:
            steps = self._steps_from(w, ctx)
            out[w] = frozenset(
                s for s in self.all_assignments(w, ctx)
                if all((z := tab[s]) is None or z in a[tgt] for tgt, tab in steps))
        return Attribute(ctx, out)

    def _fixpoint(self, a: Attribute, b: Attribute, start: Attribute) -> Attribute:
        if a.context != b.context:
            raise ContextMismatch("until operands live in different contexts")
        c = start
        while True:
            self.fixpoint_rounds += 1
            nc = self.next_op(c)
            new = Attribute(a.context, {w: b[w] | (a[w] & nc[w]) for w in self.model.worlds})
            if new == c:
                return c
            c = new

    def until_op(self, a: Attribute, b: Attribute) -> Attribute:
        return self._fixpoint(a, b, self.bottom(a.context))

    def wuntil_op(self, a: Attribute, b: Attribute) -> Attribute:
        return self._fixpoint(a, b, self.top(a.context))


def _so_index(ctx: Ctx, var: str) -> int:
    for i in range(len(ctx) - 1, -1, -1):
        if ctx[i].name == var and ctx[i].second_order:
            return i
    raise ContextMismatch(f"{var!r} is not a second-order variable of the context")


# -- functional surface ---------------------------------------------------------

def evaluate(fc: FormulaInContext, m: CounterpartModel, so_cap: int = DEFAULT_SO_CAP) -> Attribute:
    return Evaluator(m, so_cap).evaluate(fc)


def eval_term(t: Term, world: str, assignment: Mapping[str, str], m: CounterpartModel) -> str:
    """Value of ``t`` at ``world`` under a first-order assignment."""
    w = m.world(world)

    def go(u: Term) -> str:
        if isinstance(u, Var):
            return assignment[u.name]
        return w.tables[u.fn][tuple(go(x) for x in u.args)]

    return go(t)


def next_op(a: Attribute, m: CounterpartModel) -> Attribute:
    return Evaluator(m).next_op(a)


def wnext_op(a: Attribute, m: CounterpartModel) -> Attribute:
    return Evaluator(m).wnext_op(a)


def until_op(a: Attribute, b: Attribute, m: CounterpartModel) -> Attribute:
    return Evaluator(m).until_op(a, b)


def wuntil_op(a: Attribute, b: Attribute, m: CounterpartModel) -> Attribute:
    return Evaluator(m).wuntil_op(a, b)


def attribute(ctx: Ctx, rows: Mapping[str, Iterable]) -> Attribute:
    """Build an attribute from per-world iterables of assignment tuples."""
    return Attribute(ctx, {w: frozenset(tuple(r) for r in rs) for w, rs in rows.items()})

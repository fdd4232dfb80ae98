"""Random counterpart models and formulas for cross-checking the evaluators.

Every generated model has at least one deadlock world and at least one cycle.
Element names repeat across worlds on purpose: names carry no identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .logic.syntax import (
    FF, TT, Always, And, Eq, Eventually, ExistsFO, ExistsSO, ForallFO, ForallSO, Formula,
    FormulaInContext, Macro, Mem, NegAtom, Neq, Next, Or, Until, WNext, WUntil,
)
from .logic import prepare
from .model import CounterpartModel, Transition, World, make_model, outgoing, validate_model
from .sigterm import App, FunctionSymbol, Signature, Var, graph_signature

SIGNATURES = {
    "graph": graph_signature(),
    "item": Signature(("item",), ()),
    "fiber": Signature(("a", "b"), (FunctionSymbol("f", ("a",), "b"),)),
}

# rough bound on assignments per world: 4 per first-order, 16 per second-order variable
ASSIGNMENT_BUDGET = 1024


def _sort_order(sig: Signature) -> list[str]:
    """Sorts ordered so that every function's result sort comes before its argument sort."""
    order, left = [], list(sig.sorts)
    while left:
        for s in left:
            deps = {f.result_sort for f in sig.functions if s in f.arg_sorts} - {s}
            if deps <= set(order):
                order.append(s)
                left.remove(s)
                break
        else:
            raise ValueError("generator supports only acyclic unary signatures")
    return order


def _prefix(sort: str) -> str:
    return sort[0]


def random_world(rng: random.Random, sig: Signature, name: str, max_elems: int = 4) -> World:
    carriers, tables = {}, {}
    for s in _sort_order(sig):
        fns = [f for f in sig.functions if f.arg_sorts == (s,)]
        n = 0 if rng.random() < 0.1 else rng.randint(1, max_elems)
        if any(not carriers[f.result_sort] for f in fns):
            n = 0
        elems = [f"{_prefix(s)}{i}" for i in range(n)]
        carriers[s] = frozenset(elems)
        for f in fns:
            targets = sorted(carriers[f.result_sort])
            tables[f.name] = {(e,): rng.choice(targets) for e in elems}
    for f in sig.functions:
        tables.setdefault(f.name, {})
    return World(name, carriers, tables)


def random_partial_hom(rng: random.Random, sig: Signature, src: World, tgt: World,
                       name: str, keep: float = 0.75) -> Transition:
    """A random partial homomorphism, built sort by sort so it is valid by construction."""
    maps = {}
    for s in _sort_order(sig):
        fns = [f for f in sig.functions if f.arg_sorts == (s,)]
        mp = {}
        for x in sorted(src.carrier(s)):
            if rng.random() >= keep:
                continue
            cands = []
            for y in sorted(tgt.carrier(s)):
                ok = True
                for f in fns:
                    fx = src.tables[f.name][(x,)]
                    rmap = maps[f.result_sort]
                    if fx not in rmap or rmap[fx] != tgt.tables[f.name][(y,)]:
                        ok = False
                        break
                if ok:
                    cands.append(y)
            if cands:
                mp[x] = rng.choice(cands)
        maps[s] = mp
    return Transition(name, src.name, tgt.name, maps)


def random_model(rng: random.Random, sig: Signature | None = None, max_worlds: int = 4,
                 max_elems: int = 4, max_transitions: int = 6) -> CounterpartModel:
    if sig is None:
        sig = SIGNATURES[rng.choice(sorted(SIGNATURES))]
    n = rng.randint(2, max_worlds)
    worlds = [random_world(rng, sig, f"w{i}", max_elems) for i in range(n)]
    deadlock = worlds[-1]
    live = worlds[:-1]
    edges = []
    c = rng.choice(live)
    if len(live) > 1 and rng.random() < 0.5:
        d = rng.choice([w for w in live if w is not c])
        edges += [(c, d), (d, c)]
    else:
        edges.append((c, c))
    if rng.random() < 0.8:
        edges.append((rng.choice(live), deadlock))
    while len(edges) < max_transitions and rng.random() < 0.6:
        edges.append((rng.choice(live), rng.choice(worlds)))
    transitions = [random_partial_hom(rng, sig, a, b, f"t{i}") for i, (a, b) in enumerate(edges)]
    m = validate_model(make_model(sig, worlds, transitions))
    assert not outgoing(m, deadlock.name)
    return m


# -- formulas --------------------------------------------------------------------

@dataclass
class _Scope:
    fo: list
    so: list

    def cost(self) -> int:
        return 4 ** len(self.fo) * 16 ** len(self.so)


def _terms_of_sort(sig: Signature, scope: _Scope, sort: str) -> list:
    out = [Var(x) for x, s in scope.fo if s == sort]
    for f in sig.functions:
        if f.result_sort == sort and len(f.arg_sorts) == 1:
            out += [App(f.name, (Var(x),)) for x, s in scope.fo if s == f.arg_sorts[0]]
    return out


def _atom(rng: random.Random, sig: Signature, scope: _Scope) -> Formula:
    choices = ["tt", "ff"]
    mems = [(t, chi) for chi, s in scope.so for t in _terms_of_sort(sig, scope, s)]
    eqs = [s for s in sig.sorts if _terms_of_sort(sig, scope, s)]
    if mems:
        choices += ["mem"] * 6 + ["negmem"] * 5
    if eqs:
        choices += ["eq"] * 4 + ["neq"] * 3 + ["present"] * 2
    kind = rng.choice(choices)
    if kind == "tt":
        return TT()
    if kind == "ff":
        return FF()
    if kind in ("mem", "negmem"):
        t, chi = rng.choice(mems)
        return Mem(t, chi) if kind == "mem" else NegAtom(Mem(t, chi))
    sort = rng.choice(eqs)
    terms = _terms_of_sort(sig, scope, sort)
    if kind == "present":
        return Macro("present", (rng.choice(terms),))
    node = Eq if kind == "eq" else Neq
    if len(terms) > 1:
        left, right = rng.sample(terms, 2)
    else:
        left = right = terms[0]
    return node(left, right)


_UNARY = [Next, WNext, Eventually, Always]
_BINARY = [Or, And, Until, WUntil]


def random_formula(rng: random.Random, sig: Signature, fo, so, depth: int = 5) -> Formula:
    scope = _Scope(list(fo), list(so))
    counter = [0]
    return _formula(rng, sig, scope, depth, counter)


def _formula(rng, sig, scope: _Scope, depth: int, counter) -> Formula:
    if depth <= 1 or rng.random() < 0.2:
        return _atom(rng, sig, scope)
    kind = rng.choice(["unary"] * 3 + ["binary"] * 4 + ["fo"] * 2 + ["so"])
    if kind == "unary":
        return rng.choice(_UNARY)(_formula(rng, sig, scope, depth - 1, counter))
    if kind == "binary":
        return rng.choice(_BINARY)(_formula(rng, sig, scope, depth - 1, counter),
                                   _formula(rng, sig, scope, depth - 1, counter))
    second = kind == "so"
    if scope.cost() * (16 if second else 4) > ASSIGNMENT_BUDGET:
        return _formula(rng, sig, scope, depth, counter) if rng.random() < 0.5 else _atom(rng, sig, scope)
    sort = rng.choice(sig.sorts)
    counter[0] += 1
    var = f"{'S' if second else 'v'}{counter[0]}"
    target = scope.so if second else scope.fo
    target.append((var, sort))
    body = _formula(rng, sig, scope, depth - 1, counter)
    target.pop()
    if second:
        return rng.choice([ExistsSO, ForallSO])(var, sort, body)
    return rng.choice([ExistsFO, ForallFO])(var, sort, body)


def random_context(rng: random.Random, sig: Signature, max_fo: int = 2, max_so: int = 1):
    fo = tuple((f"x{i}", rng.choice(sig.sorts)) for i in range(rng.randint(0, max_fo)))
    so = tuple((f"X{i}", rng.choice(sig.sorts)) for i in range(rng.randint(0, max_so)))
    return fo, so


def random_formula_in_context(rng: random.Random, sig: Signature, depth: int = 5,
                              expand_eq: bool = False) -> FormulaInContext:
    fo, so = random_context(rng, sig)
    body = random_formula(rng, sig, fo, so, depth)
    return prepare(body, fo, so, sig, expand_eq=expand_eq)


def corpus(seed: int = 0, n_models: int = 200, n_formulas: int = 50,
           depth: int = 5) -> Iterator[tuple[CounterpartModel, list[FormulaInContext]]]:
    rng = random.Random(seed)
    for _ in range(n_models):
        m = random_model(rng)
        yield m, [random_formula_in_context(rng, m.signature, depth) for _ in range(n_formulas)]


def has_cycle(m: CounterpartModel) -> bool:
    succ = {w: {t.target for t in outgoing(m, w)} for w in m.worlds}
    state = {}

    def visit(w):
        state[w] = 1
        for v in succ[w]:
            if state.get(v) == 1 or (v not in state and visit(v)):
                return True
        state[w] = 2
        return False

    return any(w not in state and visit(w) for w in m.worlds)

"""Second evaluator built on an explicit configuration graph.

A configuration is a world together with an assignment; every transition out
of the world yields an edge to the moved assignment, or to the absorbing
``DEAD`` node when some first-order value has no counterpart.  Temporal
operators are computed with the classical graph algorithms (counter-based
backward propagation for ``U``, deletion to a greatest fixpoint for ``W``)
instead of attribute iteration, so agreement with :mod:`cqtl.eval` is a
meaningful cross-check.  Non-temporal connectives are shared with the main
evaluator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import ContextMismatch, NonComposablePath, StateSpaceCap
from .eval import DEFAULT_SO_CAP, Attribute, Binding, Ctx, Evaluator
from .model import CounterpartModel, Transition

DEFAULT_CONFIG_CAP = 2_000_000


class Config(NamedTuple):
    world: str
    assignment: tuple

    def __str__(self):
        vals = ",".join("{" + ",".join(sorted(v)) + "}" if isinstance(v, frozenset) else v
                        for v in self.assignment)
        return f"{vals}@{self.world}"


class _Dead:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "DEAD"

    __str__ = __repr__


DEAD = _Dead()


def move(t: Transition, ctx: Ctx, assignment: tuple):
    """Move an assignment along ``t``; ``DEAD`` if a first-order value is deallocated."""
    out = []
    for b, v in zip(ctx, assignment):
        mp = t.maps.get(b.sort, {})
        if b.second_order:
            out.append(frozenset(mp[x] for x in v if x in mp))
        elif v in mp:
            out.append(mp[v])
        else:
            return DEAD
    return tuple(out)


@dataclass
class ConfigGraph:
    context: Ctx
    live: dict[str, list[Config]] = field(default_factory=dict)
    succ: dict = field(default_factory=dict)
    pred: dict = field(default_factory=dict)

    @property
    def nodes(self):
        for configs in self.live.values():
            yield from configs
        yield DEAD

    def __len__(self):
        return sum(len(c) for c in self.live.values()) + 1


def build_config_graph(m: CounterpartModel, ctx: Ctx, so_cap: int = DEFAULT_SO_CAP,
                       max_configs: int = DEFAULT_CONFIG_CAP,
                       evaluator: Evaluator | None = None) -> ConfigGraph:
    ev = evaluator or Evaluator(m, so_cap)
    g = ConfigGraph(ctx)
    total = 0
    for w in m.worlds:
        assignments = ev.all_assignments(w, ctx)
        total += len(assignments)
        if total > max_configs:
            raise StateSpaceCap(f"configuration graph exceeds {max_configs} nodes")
        g.live[w] = [Config(w, a) for a in sorted(assignments, key=_key)]
    g.succ[DEAD] = [(None, DEAD)]
    g.pred[DEAD] = [DEAD]
    for w, configs in g.live.items():
        out = [t for t in m.transitions.values() if t.source == w]
        for c in configs:
            edges = []
            for t in out:
                moved = move(t, ctx, c.assignment)
                nxt = DEAD if moved is DEAD else Config(t.target, moved)
                edges.append((t.name, nxt))
                g.pred.setdefault(nxt, []).append(c)
            g.succ[c] = edges
    return g


def _key(a):
    return tuple((1, tuple(sorted(v))) if isinstance(v, frozenset) else (0, (v,)) for v in a)


class OracleEvaluator(Evaluator):
    def __init__(self, model: CounterpartModel, so_cap: int = DEFAULT_SO_CAP,
                 max_configs: int = DEFAULT_CONFIG_CAP):
        super().__init__(model, so_cap)
        self.max_configs = max_configs
        self._graphs: dict = {}

    @property
    def config_count(self) -> int:
        return sum(len(g) for g in self._graphs.values())

    def graph(self, ctx: Ctx) -> ConfigGraph:
        if ctx not in self._graphs:
            self._graphs[ctx] = build_config_graph(self.model, ctx, self.so_cap,
                                                   self.max_configs, evaluator=self)
        return self._graphs[ctx]

    def _sat(self, a: Attribute) -> set:
        return {Config(w, s) for w, rows in a.per_world.items() for s in rows}

    def _attribute(self, ctx: Ctx, nodes) -> Attribute:
        out = {w: set() for w in self.model.worlds}
        for n in nodes:
            if n is not DEAD:
                out[n.world].add(n.assignment)
        return Attribute(ctx, {w: frozenset(v) for w, v in out.items()})

    def next_op(self, a: Attribute) -> Attribute:
        g = self.graph(a.context)
        sat = self._sat(a)
        return self._attribute(a.context, (
            n for n in g.nodes if n is not DEAD
            and all(nxt is not DEAD and nxt in sat for _, nxt in g.succ[n])))

    def wnext_op(self, a: Attribute) -> Attribute:
        g = self.graph(a.context)
        sat = self._sat(a)
        return self._attribute(a.context, (
            n for n in g.nodes if n is not DEAD
            and all(nxt is DEAD or nxt in sat for _, nxt in g.succ[n])))

    def until_op(self, a: Attribute, b: Attribute) -> Attribute:
        if a.context != b.context:
            raise ContextMismatch("until operands live in different contexts")
        g = self.graph(a.context)
        sat_a, sat_b = self._sat(a), self._sat(b)
        # pending[n]: successors of n not yet known to satisfy the until
        pending = {n: len(g.succ[n]) for n in g.nodes if n is not DEAD}
        done = set()
        queue = deque()
        for n in pending:
            if n in sat_b or (n in sat_a and pending[n] == 0):
                done.add(n)
                queue.append(n)
        while queue:
            n = queue.popleft()
            for p in g.pred.get(n, ()):
                if p is DEAD or p in done or p not in sat_a:
                    continue
                pending[p] -= 1
                if pending[p] == 0:
                    done.add(p)
                    queue.append(p)
        return self._attribute(a.context, done)

    def wuntil_op(self, a: Attribute, b: Attribute) -> Attribute:
        if a.context != b.context:
            raise ContextMismatch("until operands live in different contexts")
        g = self.graph(a.context)
        sat_a, sat_b = self._sat(a), self._sat(b)
        alive = {n for n in g.nodes if n is not DEAD and (n in sat_a or n in sat_b)}
        queue = deque(n for n in alive if n not in sat_b
                      and any(nxt not in alive for _, nxt in g.succ[n]))
        while queue:
            n = queue.popleft()
            if n not in alive:
                continue
            alive.discard(n)
            for p in g.pred.get(n, ()):
                if p in alive and p not in sat_b:
                    queue.append(p)
        return self._attribute(a.context, alive)


def oracle_eval(fc, m: CounterpartModel, so_cap: int = DEFAULT_SO_CAP) -> Attribute:
    return OracleEvaluator(m, so_cap).evaluate(fc)


def trajectory(m: CounterpartModel, start: Config, path: Sequence[Transition | str],
               ctx: Ctx) -> list:
    """Configurations visited by ``start`` along ``path``; ``DEAD`` is absorbing."""
    out = [start]
    here = start.world
    cur = start
    for step in path:
        t = m.transition(step) if isinstance(step, str) else step
        if t.source != here:
            raise NonComposablePath(f"{t.name} starts at {t.source}, but the path is at {here}")
        here = t.target
        if cur is not DEAD:
            moved = move(t, ctx, cur.assignment)
            cur = DEAD if moved is DEAD else Config(t.target, moved)
        out.append(cur)
    return out


def parse_config(text: str, m: CounterpartModel, ctx: Ctx | None = None) -> tuple[Config, Ctx]:
    """Parse ``"e0@w0"`` or ``"n0,{n1,n2}@w1"``; sorts come from ``ctx`` or the world."""
    vals, sep, world = text.rpartition("@")
    if not sep:
        raise ValueError(f"configuration {text!r} lacks '@world'")
    w = m.world(world.strip())
    items, depth, cur = [], 0, ""
    for ch in vals:
        depth += ch == "{"
        depth -= ch == "}"
        if ch == "," and depth == 0:
            items.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        items.append(cur.strip())
    values, inferred = [], []
    for i, item in enumerate(items):
        if item.startswith("{"):
            members = frozenset(x.strip() for x in item.strip("{}").split(",") if x.strip())
            values.append(members)
            sample = next(iter(members), None)
            second = True
        else:
            values.append(item)
            sample = item
            second = False
        if ctx is None:
            sorts = [s for s in m.signature.sorts if sample in w.carrier(s)]
            if len(sorts) != 1:
                raise ValueError(f"cannot determine the sort of {item!r} at {w.name}; pass a context")
            inferred.append(Binding(f"v{i}", sorts[0], second))
    ctx = ctx if ctx is not None else tuple(inferred)
    if len(ctx) != len(values):
        raise ValueError("configuration and context differ in length")
    for b, v in zip(ctx, values):
        members = v if b.second_order else {v}
        if not set(members) <= w.carrier(b.sort):
            raise ValueError(f"{v} is not drawn from the {b.sort} carrier of {w.name}")
    return Config(w.name, tuple(values)), ctx

"""Counterpart models and their relational-presheaf view.

A model is a finite set of worlds, each carrying an algebra over a fixed
signature, plus atomic transitions.  A transition carries, for every sort, a
partial map from the source carrier to the target carrier: an element with no
image has been deallocated.  Elements are world-local; equal names in two
worlds are never identified.

The relational view turns each partial map around: the *step relation* of a
transition holds pairs ``(future, present)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DanglingWorldRef,
    HomomorphismViolation,
    ModelError,
    NonComposablePath,
    PartialTableEntry,
    UnknownWorld,
)
from .sigterm import Signature, Sort, validate_signature

PartialMap = Mapping[str, str]


@dataclass(frozen=True)
class World:
    name: str
    carriers: Mapping[Sort, frozenset[str]]
    tables: Mapping[str, Mapping[tuple[str, ...], str]] = field(default_factory=dict)

    def carrier(self, sort: Sort) -> frozenset[str]:
        return self.carriers.get(sort, frozenset())

    def apply(self, fn: str, args: tuple[str, ...]) -> str:
        return self.tables[fn][args]


@dataclass(frozen=True)
class Transition:
    name: str
    source: str
    target: str
    maps: Mapping[Sort, PartialMap] = field(default_factory=dict)

    def map(self, sort: Sort) -> PartialMap:
        return self.maps.get(sort, {})


@dataclass(frozen=True)
class CounterpartModel:
    signature: Signature
    worlds: Mapping[str, World]
    transitions: Mapping[str, Transition]

    def world(self, name: str) -> World:
        try:
            return self.worlds[name]
        except KeyError:
            raise UnknownWorld(f"no world named {name!r}") from None

    def transition(self, name: str) -> Transition:
        try:
            return self.transitions[name]
        except KeyError:
            raise ModelError(f"no transition named {name!r}") from None


def make_model(signature: Signature, worlds: Iterable[World],
               transitions: Iterable[Transition] = ()) -> CounterpartModel:
    """Build a model, normalising carriers, tables and maps so nothing is missing.

    Normalisation makes structural equality insensitive to whether an empty
    carrier or empty map was written out explicitly.
    """
    ws = {}
    for w in worlds:
        carriers = {s: frozenset(w.carriers.get(s, ())) for s in signature.sorts}
        extra = set(w.carriers) - set(signature.sorts)
        if extra:
            raise ModelError(f"world {w.name!r} has carriers for unknown sorts {sorted(extra)}")
        tables = {fn: dict(tab) for fn, tab in w.tables.items()}
        for f in signature.functions:
            tables.setdefault(f.name, {})
        if w.name in ws:
            raise ModelError(f"world {w.name!r} declared twice")
        ws[w.name] = World(w.name, carriers, tables)
    ts = {}
    for t in transitions:
        extra = set(t.maps) - set(signature.sorts)
        if extra:
            raise ModelError(f"transition {t.name!r} maps unknown sorts {sorted(extra)}")
        if t.name in ts:
            raise ModelError(f"transition {t.name!r} declared twice")
        maps = {s: dict(t.maps.get(s, {})) for s in signature.sorts}
        ts[t.name] = Transition(t.name, t.source, t.target, maps)
    return CounterpartModel(signature, ws, ts)


def validate_model(m: CounterpartModel) -> CounterpartModel:
    sig = validate_signature(m.signature)
    for w in m.worlds.values():
        _check_algebra(sig, w)
    for t in m.transitions.values():
        for end in (t.source, t.target):
            if end not in m.worlds:
                raise DanglingWorldRef(f"transition {t.name!r} refers to unknown world {end!r}")
        _check_homomorphism(sig, m.worlds[t.source], m.worlds[t.target], t)
    return m


def _check_algebra(sig: Signature, w: World) -> None:
    unknown = set(w.tables) - {f.name for f in sig.functions}
    if unknown:
        raise ModelError(f"world {w.name!r} interprets unknown symbols {sorted(unknown)}")
    for f in sig.functions:
        table = w.tables.get(f.name, {})
        domain = set(itertools.product(*(sorted(w.carrier(s)) for s in f.arg_sorts)))
        for args, val in table.items():
            if args not in domain:
                raise ModelError(f"world {w.name!r}: {f.name}{args} is outside the argument carriers")
            if val not in w.carrier(f.result_sort):
                raise ModelError(
                    f"world {w.name!r}: {f.name}{args} = {val} is not an element of sort {f.result_sort}")
        missing = domain - set(table)
        if missing:
            args = min(missing)
            raise PartialTableEntry(f"world {w.name!r}: {f.name}{args} is undefined")


def _check_homomorphism(sig: Signature, src: World, tgt: World, t: Transition) -> None:
    for sort in sig.sorts:
        for a, b in t.map(sort).items():
            if a not in src.carrier(sort):
                raise ModelError(f"transition {t.name!r}: {a} is not a {sort} of {src.name}")
            if b not in tgt.carrier(sort):
                raise ModelError(f"transition {t.name!r}: {b} is not a {sort} of {tgt.name}")
    for f in sig.functions:
        doms = [sorted(t.map(s)) for s in f.arg_sorts]
        for args in itertools.product(*doms):
            val = src.apply(f.name, args)
            rmap = t.map(f.result_sort)
            if val not in rmap:
                raise HomomorphismViolation(
                    f"transition {t.name!r}: arguments {args} of {f.name} are mapped "
                    f"but {f.name}{args} = {val} is not",
                    symbol=f.name, args=args, transition=t.name)
            image_args = tuple(t.map(s)[a] for s, a in zip(f.arg_sorts, args))
            expected = tgt.apply(f.name, image_args)
            if rmap[val] != expected:
                raise HomomorphismViolation(
                    f"transition {t.name!r}: {f.name}{args} = {val} maps to {rmap[val]}, "
                    f"but {f.name}{image_args} = {expected} in {tgt.name}",
                    symbol=f.name, args=args, transition=t.name)


def outgoing(m: CounterpartModel, w: str) -> tuple[Transition, ...]:
    m.world(w)
    return tuple(t for t in m.transitions.values() if t.source == w)


# -- relations -------------------------------------------------------------------

def _subsets(items: Iterable[str]) -> list[frozenset[str]]:
    items = sorted(items)
    return [frozenset(c) for r in range(len(items) + 1)
            for c in itertools.combinations(items, r)]


@dataclass(frozen=True)
class SortedRelation:
    """Relation from a present carrier to a future one, stored as (future, present) pairs."""

    from_carrier: frozenset[str]
    to_carrier: frozenset[str]
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        for fut, pres in self.pairs:
            if fut not in self.to_carrier or pres not in self.from_carrier:
                raise ModelError(f"pair ({fut}, {pres}) is outside the carriers")

    @classmethod
    def identity(cls, carrier: Iterable[str]) -> SortedRelation:
        carrier = frozenset(carrier)
        return cls(carrier, carrier, frozenset((a, a) for a in carrier))

    def image(self, present: Iterable[str]) -> frozenset[str]:
        present = set(present)
        return frozenset(fut for fut, pres in self.pairs if pres in present)

    def converse_is_partial_function(self) -> bool:
        seen = {}
        for fut, pres in self.pairs:
            if seen.setdefault(pres, fut) != fut:
                return False
        return True

    def converse(self) -> dict[str, str]:
        if not self.converse_is_partial_function():
            raise ModelError("converse of the relation is not a partial function")
        return {pres: fut for fut, pres in self.pairs}

    def then(self, other: SortedRelation) -> SortedRelation:
        """Step along ``self`` and then along ``other``."""
        pairs = frozenset((c, a) for b, a in self.pairs for c, b2 in other.pairs if b == b2)
        return SortedRelation(self.from_carrier, other.to_carrier, pairs)


@dataclass(frozen=True)
class PowersetRelation:
    """The power-set lift of a relation: each present subset has exactly one future subset."""

    relation: SortedRelation

    def __call__(self, present: Iterable[str]) -> frozenset[str]:
        return self.relation.image(present)

    @property
    def pairs(self) -> frozenset[tuple[frozenset[str], frozenset[str]]]:
        return frozenset((self(s), s) for s in _subsets(self.relation.from_carrier))

    def then(self, other: PowersetRelation) -> frozenset[tuple[frozenset[str], frozenset[str]]]:
        """Pairs of the composite of the two lifts, computed on subsets directly."""
        return frozenset((other(self(s)), s) for s in _subsets(self.relation.from_carrier))


def lift_powerset(r: SortedRelation) -> PowersetRelation:
    return PowersetRelation(r)


def lax_lift(r: SortedRelation) -> frozenset[tuple[frozenset[str], frozenset[str]]]:
    """Two-sided lifting: every present element has a future in B and vice versa."""
    out = set()
    for a_set in _subsets(r.from_carrier):
        for b_set in _subsets(r.to_carrier):
            if (all(any((b, a) in r.pairs for b in b_set) for a in a_set)
                    and all(any((b, a) in r.pairs for a in a_set) for b in b_set)):
                out.add((b_set, a_set))
    return frozenset(out)


def compose_pair_relations(first, second):
    """Relational composite of two sets of (future, present) pairs."""
    return frozenset((c, a) for b, a in first for c, b2 in second if b == b2)


def step_relation(t: Transition, sort: Sort, m: CounterpartModel | None = None) -> SortedRelation:
    mp = t.map(sort)
    if m is not None:
        src, tgt = m.world(t.source).carrier(sort), m.world(t.target).carrier(sort)
    else:
        src, tgt = frozenset(mp), frozenset(mp.values())
    return SortedRelation(src, tgt, frozenset((b, a) for a, b in mp.items()))


def epsilon_step(t: Transition, sort: Sort, m: CounterpartModel):
    """Evolution of membership pairs (element, set) along ``t``.

    Returns the set of ``((b, B), (a, A))`` with ``a`` in ``A`` at the source,
    ``b`` the counterpart of ``a`` and ``B`` the image of ``A``.
    """
    rel = step_relation(t, sort, m)
    lift = lift_powerset(rel)
    out = set()
    for a_set in _subsets(rel.from_carrier):
        b_set = lift(a_set)
        for a in a_set:
            for b, a2 in rel.pairs:
                if a2 == a:
                    assert b in b_set
                    out.add(((b, b_set), (a, a_set)))
    return frozenset(out)


def compose_path(m: CounterpartModel, path: Sequence[Transition | str],
                 start: str | None = None) -> dict[Sort, dict[str, str]]:
    """Composite partial maps along a sequence of transitions."""
    ts = [m.transition(t) if isinstance(t, str) else t for t in path]
    if not ts:
        if start is None:
            raise NonComposablePath("an empty path needs a start world")
        w = m.world(start)
        return {s: {a: a for a in w.carrier(s)} for s in m.signature.sorts}
    if start is not None and ts[0].source != start:
        raise NonComposablePath(f"path starts at {ts[0].source}, not {start}")
    for t in ts:
        if t.name not in m.transitions or m.transitions[t.name] != t:
            raise NonComposablePath(f"{t.name!r} is not a transition of the model")
    for t1, t2 in zip(ts, ts[1:]):
        if t1.target != t2.source:
            raise NonComposablePath(f"{t1.name} ends at {t1.target} but {t2.name} starts at {t2.source}")
    out = {}
    for s in m.signature.sorts:
        cur = dict(ts[0].map(s))
        for t in ts[1:]:
            nxt = t.map(s)
            cur = {a: nxt[b] for a, b in cur.items() if b in nxt}
        out[s] = cur
    return out


# -- relational view round trip -------------------------------------------------

@dataclass(frozen=True)
class RelationalView:
    """Carriers per world, step relations per generator, and operation tables."""

    signature: Signature
    carriers: Mapping[str, Mapping[Sort, frozenset[str]]]
    operations: Mapping[str, Mapping[str, Mapping[tuple[str, ...], str]]]
    generators: Mapping[str, tuple[str, str]]
    relations: Mapping[str, Mapping[Sort, SortedRelation]]


def to_relational_view(m: CounterpartModel) -> RelationalView:
    return RelationalView(
        signature=m.signature,
        carriers={w.name: dict(w.carriers) for w in m.worlds.values()},
        operations={w.name: {f: dict(tab) for f, tab in w.tables.items()}
                    for w in m.worlds.values()},
        generators={t.name: (t.source, t.target) for t in m.transitions.values()},
        relations={t.name: {s: step_relation(t, s, m) for s in m.signature.sorts}
                   for t in m.transitions.values()},
    )


def from_relational_view(v: RelationalView) -> CounterpartModel:
    worlds = [World(w, v.carriers[w], v.operations[w]) for w in v.carriers]
    transitions = [Transition(name, src, tgt, {s: r.converse() for s, r in v.relations[name].items()})
                   for name, (src, tgt) in v.generators.items()]
    return validate_model(make_model(v.signature, worlds, transitions))


def roundtrip_relational_view(m: CounterpartModel) -> CounterpartModel:
    return from_relational_view(to_relational_view(m))

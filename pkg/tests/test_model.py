import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from cqtl.corpus import random_model
from cqtl.errors import (
    DanglingWorldRef, HomomorphismViolation, NonComposablePath, PartialTableEntry, UnknownWorld,
)
from cqtl.model import (
    SortedRelation, Transition, World, compose_path, epsilon_step, lift_powerset, make_model,
    outgoing, roundtrip_relational_view, step_relation, validate_model,
)
from cqtl.sigterm import Signature, graph_signature


def test_running_example_is_valid(running):
    assert validate_model(running) is running
    assert sorted(running.worlds) == ["w0", "w1", "w2"]
    assert sorted(running.transitions) == ["f0", "f1", "f2", "f3"]


def test_edge_mapped_without_its_source_is_rejected(running):
    f0 = running.transition("f0")
    nodes = {k: v for k, v in f0.map("node").items() if k != "n0"}
    broken = replace(f0, maps={**f0.maps, "node": nodes})
    m = make_model(running.signature, running.worlds.values(),
                   [broken if t.name == "f0" else t for t in running.transitions.values()])
    with pytest.raises(HomomorphismViolation) as info:
        validate_model(m)
    assert info.value.transition == "f0"


def test_model_without_transitions_is_valid(running):
    m = make_model(running.signature, running.worlds.values(), [])
    assert validate_model(m) is m


def test_incomplete_table_is_rejected():
    w = World("w", {"node": frozenset({"n"}), "edge": frozenset({"e"})}, {"s": {("e",): "n"}, "t": {}})
    with pytest.raises(PartialTableEntry):
        validate_model(make_model(graph_signature(), [w], []))


def test_dangling_world_reference():
    w = World("w", {}, {})
    with pytest.raises(DanglingWorldRef):
        validate_model(make_model(Signature(("a",)), [w], [Transition("t", "w", "nowhere", {})]))


def test_step_relation_examples(running):
    assert step_relation(running.transition("f0"), "node", running).pairs == {
        ("n3", "n0"), ("n4", "n1"), ("n3", "n2")}
    assert step_relation(running.transition("f1"), "edge", running).pairs == {("e5", "e3")}
    f3 = step_relation(running.transition("f3"), "node", running)
    assert f3 == SortedRelation.identity({"n5"})


def test_step_relations_have_functional_converse(running):
    for t in running.transitions.values():
        for s in running.signature.sorts:
            assert step_relation(t, s, running).converse_is_partial_function()


def test_lift_examples(running):
    r = step_relation(running.transition("f0"), "edge", running)
    lift = lift_powerset(r)
    assert lift({"e0", "e2"}) == {"e3"}
    assert lift(set()) == frozenset()
    f0 = step_relation(running.transition("f0"), "node", running)
    f1 = step_relation(running.transition("f1"), "node", running)
    whole = {"n0", "n1", "n2"}
    assert lift_powerset(f0.then(f1))(whole) == {"n5"}
    assert lift_powerset(f1)(lift_powerset(f0)(whole)) == {"n5"}


def test_lift_is_functional_in_the_future_direction(running):
    lift = lift_powerset(step_relation(running.transition("f0"), "node", running))
    presents = [p for _, p in lift.pairs]
    assert len(presents) == len(set(presents)) == 8


def test_epsilon_examples(running):
    eps = epsilon_step(running.transition("f0"), "edge", running)
    a = frozenset({"e0", "e2"})
    assert (("e3", frozenset({"e3"})), ("e0", a)) in eps
    assert (("e3", frozenset({"e3", "e4"})), ("e0", a)) not in eps
    for (b, bs), (x, xs) in eps:
        assert b in bs and x in xs
    ident = epsilon_step(running.transition("f3"), "edge", running)
    assert ident == {(p, p) for p in [("e5", frozenset({"e5"}))]}


def test_compose_path_examples(running):
    assert compose_path(running, ["f0", "f1"])["edge"] == {"e0": "e5"}
    assert compose_path(running, ["f0", "f2"])["edge"] == {"e1": "e5"}
    assert compose_path(running, [], start="w0")["node"] == {"n0": "n0", "n1": "n1", "n2": "n2"}
    assert compose_path(running, ["f1"]) == {s: dict(running.transition("f1").map(s))
                                           for s in running.signature.sorts}
    with pytest.raises(NonComposablePath):
        compose_path(running, ["f0", "f3"])


def test_compose_path_is_associative(running):
    p1, p2 = compose_path(running, ["f0"]), compose_path(running, ["f1", "f3"])
    whole = compose_path(running, ["f0", "f1", "f3"])
    for s in running.signature.sorts:
        assert whole[s] == {a: p2[s][b] for a, b in p1[s].items() if b in p2[s]}


def test_outgoing(running):
    assert {t.name for t in outgoing(running, "w1")} == {"f1", "f2"}
    assert {t.name for t in outgoing(running, "w2")} == {"f3"}
    with pytest.raises(UnknownWorld):
        outgoing(running, "w9")
    lonely = make_model(Signature(("a",)), [World("w", {}, {})], [])
    assert outgoing(lonely, "w") == ()


def test_relational_round_trip(running):
    assert roundtrip_relational_view(running) == running
    empty = make_model(Signature(), [], [])
    assert roundtrip_relational_view(empty) == empty


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_random_models_are_valid_and_round_trip(seed):
    m = random_model(random.Random(seed))
    assert validate_model(m) is m
    assert roundtrip_relational_view(m) == m
    # every in-domain tuple commutes with every table
    for t in m.transitions.values():
        src, tgt = m.world(t.source), m.world(t.target)
        for f in m.signature.functions:
            for args, val in src.tables[f.name].items():
                if all(a in t.map(s) for a, s in zip(args, f.arg_sorts)):
                    image = tuple(t.map(s)[a] for a, s in zip(args, f.arg_sorts))
                    assert t.map(f.result_sort)[val] == tgt.tables[f.name][image]

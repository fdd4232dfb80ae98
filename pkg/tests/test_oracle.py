import random

import pytest
from hypothesis import given, settings, strategies as st

from cqtl.corpus import random_formula_in_context, random_model
from cqtl.errors import NonComposablePath
from cqtl.eval import Binding, Evaluator, attribute, context_of
from cqtl.model import compose_path, make_model
from cqtl.oracle import DEAD, Config, OracleEvaluator, build_config_graph, parse_config, trajectory

EDGE = (Binding("x", "edge"),)


def test_edge_configuration_graph(running):
    g = build_config_graph(running, EDGE)
    assert sum(len(c) for c in g.live.values()) == 6
    assert len(g) == 7
    e0 = Config("w0", ("e0",))
    assert dict(g.succ[e0]) == {"f0": Config("w1", ("e3",))}
    assert dict(g.succ[Config("w1", ("e3",))]) == {"f1": Config("w2", ("e5",)), "f2": DEAD}
    assert g.succ[DEAD] == [(None, DEAD)]
    for w, configs in g.live.items():
        for c in configs:
            assert len(g.succ[c]) == sum(t.source == w for t in running.transitions.values())


def test_empty_context_has_one_node_per_world(running):
    g = build_config_graph(running, ())
    assert {w: len(c) for w, c in g.live.items()} == {"w0": 1, "w1": 1, "w2": 1}


def test_toy_model_dies_immediately(twostate):
    g = build_config_graph(twostate, (Binding("x", "item"),))
    assert dict(g.succ[Config("s0", ("i",))]) == {"f0": DEAD}


def test_trajectories(running):
    start, ctx = parse_config("e0@w0", running)
    assert [str(c) for c in trajectory(running, start, ["f0", "f1", "f3"], ctx)] == \
        ["e0@w0", "e3@w1", "e5@w2", "e5@w2"]
    assert trajectory(running, start, ["f0", "f2"], ctx) == [start, Config("w1", ("e3",)), DEAD]
    assert trajectory(running, start, [], ctx) == [start]
    with pytest.raises(NonComposablePath):
        trajectory(running, start, ["f1"], ctx)


def test_parse_config_with_sets(running):
    conf, ctx = parse_config("n3,{n3,n4}@w1", running)
    assert conf == Config("w1", ("n3", frozenset({"n3", "n4"})))
    assert [b.second_order for b in ctx] == [False, True]
    assert str(trajectory(running, conf, ["f1"], ctx)[-1]) == "n5,{n5}@w2"


def test_trajectory_respects_compose_path(running):
    ctx = (Binding("x", "edge"), Binding("y", "node"))
    for path in (["f0"], ["f0", "f1"], ["f0", "f2", "f3"], ["f0", "f1", "f3", "f3"]):
        maps = compose_path(running, path)
        for e in sorted(running.world("w0").carrier("edge")):
            for n in sorted(running.world("w0").carrier("node")):
                end = trajectory(running, Config("w0", (e, n)), path, ctx)[-1]
                if e in maps["edge"] and n in maps["node"]:
                    assert end.assignment == (maps["edge"][e], maps["node"][n])
                else:
                    assert end is DEAD


def test_no_transitions_reduces_to_propositional(running):
    m = make_model(running.signature, running.worlds.values(), [])
    rng = random.Random(7)
    for _ in range(30):
        fc = random_formula_in_context(rng, m.signature)
        assert OracleEvaluator(m).evaluate(fc) == Evaluator(m).evaluate(fc)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_per_node_until_agreement(seed):
    # compare the raw operators on random attributes, not just whole formulas
    rng = random.Random(seed)
    m = random_model(rng)
    fc = random_formula_in_context(rng, m.signature)
    fix, orc = Evaluator(m), OracleEvaluator(m)
    ctx = context_of(fc)
    top = fix.top(ctx)

    def rand_attr():
        return attribute(ctx, {w: [s for s in top[w] if rng.random() < 0.5] for w in m.worlds})

    a, b = rand_attr(), rand_attr()
    assert fix.until_op(a, b) == orc.until_op(a, b)
    assert fix.wuntil_op(a, b) == orc.wuntil_op(a, b)
    assert fix.next_op(a) == orc.next_op(a)
    assert fix.wnext_op(a) == orc.wnext_op(a)

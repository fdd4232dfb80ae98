import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cqtl import fixture_path
from cqtl.corpus import random_model
from cqtl.errors import HomomorphismViolation, ParseError, ValidationError
from cqtl.eval import Evaluator
from cqtl.logic import prepare
from cqtl.results import ResultDocument, emit_json, load_json
from cqtl.textformat import dumps_model, load_model, loads_model

HEADER = "signature { sort a; fn f : a -> a; }\n"


def test_running_fixture_loads():
    m = load_model(fixture_path("running.cm"))
    assert len(m.worlds) == 3 and len(m.transitions) == 4


def test_empty_file_is_a_parse_error():
    with pytest.raises(ParseError):
        loads_model("")
    with pytest.raises(ParseError):
        loads_model("# only a comment\n")


def test_unknown_world_is_a_validation_error():
    text = HEADER + "world w { a: x; f(x) = x; }\ntransition t : w -> v { }\n"
    with pytest.raises(ValidationError):
        loads_model(text)


def test_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        loads_model(HEADER + "world w {\n  a: x\n}\n")
    assert info.value.line == 4


def test_duplicate_mapping_is_rejected():
    text = HEADER + "world w { a: x, y; f(x) = x; f(y) = y; }\ntransition t : w -> w { a: x -> x, x -> y; }\n"
    with pytest.raises(ValidationError):
        loads_model(text)


def test_homomorphism_failure_points_at_transition():
    text = HEADER + ("world w { a: x, y; f(x) = y; f(y) = y; }\n"
                     "transition t : w -> w {\n  a: x -> x;\n}\n")
    with pytest.raises(ValidationError) as info:
        loads_model(text)
    assert isinstance(info.value.cause, HomomorphismViolation)
    assert info.value.line == 3


def test_unmapped_elements_have_no_counterpart():
    m = loads_model(HEADER + "world w { a: x, y; f(x) = x; f(y) = y; }\ntransition t : w -> w { a: x -> x; }\n")
    assert m.transition("t").map("a") == {"x": "x"}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_text_round_trip(seed):
    m = random_model(random.Random(seed))
    text = dumps_model(m)
    assert loads_model(text) == m
    assert dumps_model(loads_model(text)) == text


def _doc(m, text, ctx):
    fc = prepare(text, ctx, (), m.signature)
    attr = Evaluator(m).evaluate(fc)
    return ResultDocument.from_attribute(text, "x:edge", attr, stats={"fixpointRounds": 0})


def test_json_is_canonical(running):
    a = emit_json(_doc(running, "present(x) & WX[false]", (("x", "edge"),)))
    b = emit_json(_doc(running, "present(x) & WX[false]", (("x", "edge"),)))
    obj = json.loads(a)
    assert a == b
    assert a == (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()
    assert list(obj) == sorted(obj)
    assert obj["perWorld"][0] == {"world": "w0", "assignments": [{"x": "e2"}]}


def test_json_round_trip(running):
    doc = _doc(running, "exists y:edge. x != y", (("x", "edge"),))
    back = load_json(emit_json(doc))
    assert back == doc


def test_empty_result_document():
    data = emit_json(ResultDocument("true", "", []))
    assert data == b'{"context":"","formula":"true","perWorld":[],"stats":{}}\n'

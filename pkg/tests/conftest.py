import pytest

from cqtl import fixture_path, load_model
from cqtl.eval import Evaluator
from cqtl.logic import prepare


@pytest.fixture(scope="session")
def running():
    return load_model(fixture_path("running.cm"))


@pytest.fixture(scope="session")
def twostate():
    return load_model(fixture_path("twostate.cm"))


@pytest.fixture(scope="session")
def chain():
    return load_model(fixture_path("ltl_chain.cm"))


def evaluate_text(model, text, fo=(), so=(), engine=Evaluator, **kw):
    fc = prepare(text, tuple(fo), tuple(so), model.signature, **kw)
    return engine(model).evaluate(fc)


def values(attr, world):
    """Single-variable attribute at ``world`` as a plain set of values."""
    return {a[0] for a in attr[world]}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

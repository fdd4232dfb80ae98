"""Model checking quantified LTL over counterpart models."""

from importlib.resources import files

from .eval import Attribute, Binding, Evaluator, evaluate
from .logic import prepare
from .model import CounterpartModel, validate_model
from .oracle import OracleEvaluator, oracle_eval
from .textformat import dumps_model, load_model, loads_model

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a model shipped with the package (``running.cm``, ``twostate.cm``, ...)."""
    return files(__name__).joinpath("fixtures", name)

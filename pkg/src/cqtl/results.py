"""Machine-readable check results."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .eval import Attribute


@dataclass
class ResultDocument:
    formula: str
    context: str
    per_world: list[tuple[str, list[dict]]] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @classmethod
    def from_attribute(cls, formula: str, context: str, attr: Attribute,
                       worlds=None, stats=None) -> ResultDocument:
        worlds = list(attr.per_world) if worlds is None else list(worlds)
        return cls(formula, context, [(w, attr.assignments(w)) for w in worlds], dict(stats or {}))

    def to_obj(self) -> dict:
        return {
            "formula": self.formula,
            "context": self.context,
            "perWorld": [{"world": w, "assignments": rows} for w, rows in self.per_world],
            "stats": self.stats,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> ResultDocument:
        return cls(obj["formula"], obj["context"],
                   [(e["world"], e["assignments"]) for e in obj["perWorld"]],
                   obj.get("stats", {}))


def emit_json(r: ResultDocument) -> bytes:
    """Canonical bytes: sorted keys, compact separators, trailing newline."""
    text = json.dumps(r.to_obj(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def load_json(data: bytes | str) -> ResultDocument:
    return ResultDocument.from_obj(json.loads(data))

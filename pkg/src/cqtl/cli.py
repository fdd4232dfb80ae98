"""Command line interface: ``cqtl validate|check|oracle|trace``.

Exit codes: 0 success, 1 ``--require-sat`` found an empty world, 2 errors,
3 evaluator and oracle disagree under ``--compare``.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .errors import CqtlError
from .eval import DEFAULT_SO_CAP, Binding, Evaluator
from .logic import context_text, parse_context, prepare
from .oracle import DEAD, OracleEvaluator, parse_config, trajectory
from .results import ResultDocument, emit_json
from .textformat import load_model

EXIT_OK, EXIT_UNSAT, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2, 3


def _color() -> bool:
    flag = os.environ.get("CQTL_COLOR")
    if flag is not None:
        return flag == "1"
    return sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    return f"\033[{code}m{text}\033[0m" if _color() else text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cqtl", description="Counterpart-semantics QLTL model checker")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and validate a model file")
    v.add_argument("model")

    for name, engine in (("check", "fixpoint evaluator"), ("oracle", "configuration-graph oracle")):
        c = sub.add_parser(name, help=f"evaluate a formula with the {engine}")
        c.add_argument("model")
        c.add_argument("-c", "--context", default="",
                       help='context, e.g. "y:node, N:Set(node)"')
        src = c.add_mutually_exclusive_group(required=True)
        src.add_argument("-f", "--formula")
        src.add_argument("--formula-file")
        c.add_argument("--world", action="append", help="restrict output to this world (repeatable)")
        c.add_argument("--json", action="store_true", help="emit the canonical JSON result")
        c.add_argument("--oracle", action="store_true", help="use the configuration-graph oracle")
        c.add_argument("--compare", action="store_true",
                       help="with --oracle: run both engines, exit 3 if they disagree")
        c.add_argument("--expand-eq", action="store_true",
                       help="expand equality into its second-order definition")
        c.add_argument("--require-sat", action="store_true",
                       help="exit 1 unless every requested world has a satisfying assignment")
        c.add_argument("--max-so-carrier", type=int, default=DEFAULT_SO_CAP,
                       help="largest carrier a second-order variable may range over")
        c.add_argument("--timing", action="store_true", help="include elapsedMs in stats")

    t = sub.add_parser("trace", help="follow one configuration along a path")
    t.add_argument("model")
    t.add_argument("--start", required=True, help='e.g. "e0@w0" or "n0,{n1,n2}@w1"')
    t.add_argument("--path", default="", help="comma-separated transition names")
    t.add_argument("-c", "--context", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command in ("check", "oracle"):
            return cmd_check(args, use_oracle=args.command == "oracle" or args.oracle)
        return cmd_trace(args)
    except CqtlError as exc:
        print(f"cqtl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"cqtl: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def cmd_validate(args) -> int:
    m = load_model(args.model)
    print(f"valid: {len(m.worlds)} world(s), {len(m.transitions)} transition(s)")
    return EXIT_OK


def run_check(model, formula_text: str, context: str = "", *, worlds=None, use_oracle=False,
              compare=False, expand_eq=False, so_cap=DEFAULT_SO_CAP, timing=False):
    """Evaluate and package the result; returns ``(document, agreed)``.

    ``agreed`` is ``None`` unless ``compare`` is set.
    """
    fo, so = parse_context(context)
    fc = prepare(formula_text, fo, so, model.signature, expand_eq=expand_eq)
    for w in worlds or ():
        model.world(w)
    started = time.perf_counter()
    main_ev = OracleEvaluator(model, so_cap) if use_oracle else Evaluator(model, so_cap)
    attr = main_ev.evaluate(fc)
    agreed = None
    other = None
    if compare:
        other = Evaluator(model, so_cap) if use_oracle else OracleEvaluator(model, so_cap)
        agreed = other.evaluate(fc) == attr
    elapsed = (time.perf_counter() - started) * 1000
    oracle_ev = main_ev if use_oracle else other
    fix_ev = other if use_oracle else main_ev
    stats = {
        "fixpointRounds": fix_ev.fixpoint_rounds if fix_ev is not None else 0,
        "configCount": oracle_ev.config_count if oracle_ev is not None else 0,
    }
    if timing:
        stats["elapsedMs"] = round(elapsed, 3)
    doc = ResultDocument.from_attribute(formula_text, context_text(fo, so), attr, worlds, stats)
    return doc, agreed


def cmd_check(args, use_oracle: bool) -> int:
    m = load_model(args.model)
    if args.formula_file:
        with open(args.formula_file, encoding="utf-8") as fh:
            text = fh.read().strip()
    else:
        text = args.formula
    doc, agreed = run_check(m, text, args.context, worlds=args.world, use_oracle=use_oracle,
                            compare=args.compare, expand_eq=args.expand_eq,
                            so_cap=args.max_so_carrier, timing=args.timing)
    if args.json:
        sys.stdout.buffer.write(emit_json(doc))
        sys.stdout.flush()
    else:
        _print_text(doc)
    if agreed is False:
        print("cqtl: evaluator and oracle disagree", file=sys.stderr)
        return EXIT_DISAGREE
    if args.require_sat and any(not rows for _, rows in doc.per_world):
        return EXIT_UNSAT
    return EXIT_OK


def _print_text(doc: ResultDocument) -> None:
    print(f"[{doc.context}] {doc.formula}")
    for world, rows in doc.per_world:
        shown = []
        for r in rows:
            parts = []
            for k, v in r.items():
                v = "{" + ",".join(v) + "}" if isinstance(v, list) else v
                parts.append(f"{k}={v}")
            shown.append("{" + ", ".join(parts) + "}")
        print(f"  {_paint(world, '1')}: {', '.join(shown) if shown else '-'}")
    stats = ", ".join(f"{k}={v}" for k, v in sorted(doc.stats.items()))
    print(f"  ({stats})")


def cmd_trace(args) -> int:
    m = load_model(args.model)
    ctx = None
    if args.context:
        fo, so = parse_context(args.context)
        ctx = tuple(Binding(x, s, False) for x, s in fo) + tuple(Binding(x, s, True) for x, s in so)
    start, ctx = parse_config(args.start, m, ctx)
    path = [p.strip() for p in args.path.split(",") if p.strip()]
    steps = trajectory(m, start, path, ctx)
    labels = ["start"] + path
    for label, conf in zip(labels, steps):
        shown = _paint("DEAD", "31") if conf is DEAD else str(conf)
        print(f"{label:>8}  {shown}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

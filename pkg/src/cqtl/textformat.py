"""Reading and writing the model document format.

::

    signature {
      sort node; sort edge;
      fn s : edge -> node;
      fn t : edge -> node;
    }
    world w0 {
      node: n0, n1;
      edge: e0;
      s(e0) = n0; t(e0) = n1;
    }
    transition f0 : w0 -> w0 {
      node: n0 -> n0, n1 -> n1;
      edge: e0 -> e0;
    }

Elements are scoped to their world.  Elements left out of a transition block
have no counterpart.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import CqtlError, ParseError, ValidationError
from .model import CounterpartModel, Transition, World, make_model, validate_model
from .sigterm import FunctionSymbol, Signature, validate_signature

_TOKEN = re.compile(r"""
    (?P<nl>\n)
  | (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|[{}();:,=])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("ident", "op"):
            toks.append(_Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text):
        return self.tok.kind != "eof" and self.tok.text == text

    def expect(self, text):
        if not self.at(text):
            raise self.fail(f"expected {text!r}, found {self.tok.text or 'end of file'!r}")
        self.i += 1

    def ident(self, what="identifier"):
        if self.tok.kind != "ident":
            raise self.fail(f"expected {what}, found {self.tok.text or 'end of file'!r}")
        self.i += 1
        return self.toks[self.i - 1].text

    def ident_list(self, stop):
        out = []
        if self.at(stop):
            return out
        out.append(self.ident())
        while self.at(","):
            self.i += 1
            out.append(self.ident())
        return out


def loads_model(text: str) -> CounterpartModel:
    r = _Reader(text)
    if r.tok.kind == "eof":
        raise ParseError("empty model document", 1, 1)
    if not r.at("signature"):
        raise r.fail("a model document must start with a signature block")
    sig, sig_line = _signature(r)
    try:
        validate_signature(sig)
    except CqtlError as exc:
        raise ValidationError(str(exc), exc, sig_line) from exc
    worlds, transitions = [], []
    lines = {}
    while r.tok.kind != "eof":
        tok = r.tok
        if r.at("world"):
            w = _world(r, sig)
            lines[("world", w.name)] = tok.line
            worlds.append(w)
        elif r.at("transition"):
            t = _transition(r, sig)
            lines[("transition", t.name)] = tok.line
            transitions.append(t)
        else:
            raise r.fail(f"expected 'world' or 'transition', found {tok.text!r}")
    try:
        return validate_model(make_model(sig, worlds, transitions))
    except CqtlError as exc:
        line = None
        name = getattr(exc, "transition", None)
        if name is not None:
            line = lines.get(("transition", name))
        raise ValidationError(str(exc), exc, line) from exc


def load_model(path) -> CounterpartModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))


def _signature(r: _Reader):
    line = r.tok.line
    r.expect("signature")
    r.expect("{")
    sorts, fns = [], []
    while not r.at("}"):
        if r.at("sort"):
            r.i += 1
            sorts.append(r.ident("sort name"))
            r.expect(";")
        elif r.at("fn"):
            r.i += 1
            name = r.ident("function name")
            r.expect(":")
            args = r.ident_list("->")
            r.expect("->")
            res = r.ident("result sort")
            r.expect(";")
            fns.append(FunctionSymbol(name, tuple(args), res))
        else:
            raise r.fail(f"expected 'sort', 'fn' or '}}', found {r.tok.text or 'end of file'!r}")
    r.expect("}")
    return Signature(tuple(sorts), tuple(fns)), line


def _world(r: _Reader, sig: Signature) -> World:
    r.expect("world")
    name = r.ident("world name")
    r.expect("{")
    carriers, tables = {}, {}
    while not r.at("}"):
        tok = r.tok
        head = r.ident()
        if r.at(":"):
            r.i += 1
            elems = r.ident_list(";")
            r.expect(";")
            if not sig.has_sort(head):
                raise ValidationError(f"unknown sort {head!r} in world {name}", line=tok.line)
            if head in carriers:
                raise ValidationError(f"carrier of {head} given twice in world {name}", line=tok.line)
            if len(set(elems)) != len(elems):
                raise ValidationError(f"repeated element in {head} carrier of {name}", line=tok.line)
            carriers[head] = frozenset(elems)
        elif r.at("("):
            r.i += 1
            args = tuple(r.ident_list(")"))
            r.expect(")")
            r.expect("=")
            val = r.ident("element")
            r.expect(";")
            table = tables.setdefault(head, {})
            if args in table:
                raise ValidationError(f"{head}({', '.join(args)}) defined twice in world {name}",
                                      line=tok.line)
            table[args] = val
        else:
            raise r.fail("expected ':' or '('")
    r.expect("}")
    return World(name, carriers, tables)


def _transition(r: _Reader, sig: Signature) -> Transition:
    r.expect("transition")
    name = r.ident("transition name")
    r.expect(":")
    src = r.ident("source world")
    r.expect("->")
    tgt = r.ident("target world")
    r.expect("{")
    maps = {}
    while not r.at("}"):
        tok = r.tok
        sort = r.ident("sort")
        r.expect(":")
        if not sig.has_sort(sort):
            raise ValidationError(f"unknown sort {sort!r} in transition {name}", line=tok.line)
        mp = maps.setdefault(sort, {})
        while not r.at(";"):
            a = r.ident("element")
            r.expect("->")
            b = r.ident("element")
            if a in mp:
                raise ValidationError(f"{a} mapped twice in transition {name}", line=tok.line)
            mp[a] = b
            if not r.at(";"):
                r.expect(",")
        r.expect(";")
    r.expect("}")
    return Transition(name, src, tgt, maps)


def dumps_model(m: CounterpartModel) -> str:
    sig = m.signature
    out = ["signature {"]
    out += [f"  sort {s};" for s in sig.sorts]
    out += [f"  fn {f.name} : {', '.join(f.arg_sorts)} -> {f.result_sort};" for f in sig.functions]
    out.append("}")
    for w in m.worlds.values():
        out.append(f"world {w.name} {{")
        for s in sig.sorts:
            out.append(f"  {s}: {', '.join(sorted(w.carrier(s)))};")
        for f in sig.functions:
            for args, val in sorted(w.tables.get(f.name, {}).items()):
                out.append(f"  {f.name}({', '.join(args)}) = {val};")
        out.append("}")
    for t in m.transitions.values():
        out.append(f"transition {t.name} : {t.source} -> {t.target} {{")
        for s in sig.sorts:
            pairs = ", ".join(f"{a} -> {b}" for a, b in sorted(t.map(s).items()))
            out.append(f"  {s}: {pairs};")
        out.append("}")
    return "\n".join(out) + "\n"

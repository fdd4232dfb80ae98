"""Recursive-descent parser for the formula concrete syntax.

Precedence, tightest first: unary operators (``not``, ``X[..]``, ``WX[..]``,
``<>``, ``[]``), then ``U``/``W`` (right associative), then ``&``, then ``|``.
Quantifiers bind weakest: their body extends as far right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FormulaSyntaxError, NegationBelowTemporal
from ..sigterm import App, Context, Signature, Term, Var
from .syntax import (
    FF, TT, Always, And, Eq, Eventually, ExistsFO, ExistsSO, ForallFO, ForallSO,
    Formula, Macro, Mem, NegAtom, Neq, Next, Or, Until, WNext, WUntil, is_atom,
)

MACRO_NAMES = frozenset({"present", "loop", "nextStepPreserved", "nextStepDeallocated"})
KEYWORDS = frozenset({"true", "false", "not", "in", "exists", "forall",
                      "existsS", "forallS", "U", "W"})

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|<>|\[\]|[()\[\],.:&|=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'op', 'eof'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.text = text
        self.sig = sig
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        return FormulaSyntaxError(msg, tok.pos, self.text)

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    # grammar
    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def formula(self) -> Formula:
        if self.tok.kind == "ident" and self.tok.text in ("exists", "forall", "existsS", "forallS"):
            return self.quantifier()
        return self.disjunction()

    def quantifier(self) -> Formula:
        kw = self.tok.text
        self.i += 1
        var = self.ident("variable")
        self.expect(":")
        sort = self.ident("sort")
        self.expect(".")
        body = self.formula()
        node = {"exists": ExistsFO, "forall": ForallFO,
                "existsS": ExistsSO, "forallS": ForallSO}[kw]
        return node(var, sort, body)

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.at("&"):
            self.i += 1
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        left = self.unary()
        if self.tok.kind == "ident" and self.tok.text in ("U", "W"):
            op = self.tok.text
            self.i += 1
            right = self.until()
            return Until(left, right) if op == "U" else WUntil(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("not"):
            self.i += 1
            body = self.unary()
            if not is_atom(body):
                raise NegationBelowTemporal(
                    "'not' applies only to true, false, membership atoms and their "
                    "negations; push it inward using the duals (X/WX, U/W, exists/forall, "
                    "=/!=)", tok.pos, self.text)
            return NegAtom(body)
        if self.at("<>"):
            self.i += 1
            return Eventually(self.unary())
        if self.at("[]"):
            self.i += 1
            return Always(self.unary())
        if tok.kind == "ident" and tok.text in ("X", "WX") and self.peek().text == "[":
            self.i += 2
            body = self.formula()
            self.expect("]")
            return Next(body) if tok.text == "X" else WNext(body)
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if self.at("true"):
            self.i += 1
            return TT()
        if self.at("false"):
            self.i += 1
            return FF()
        if tok.kind == "ident" and tok.text in ("exists", "forall", "existsS", "forallS"):
            return self.quantifier()
        if (tok.kind == "ident" and tok.text in MACRO_NAMES and self.peek().text == "("
                and (self.sig is None or self.sig.function(tok.text) is None)):
            self.i += 1
            return Macro(tok.text, self.arguments())
        left = self.term()
        if self.at("="):
            self.i += 1
            return Eq(left, self.term())
        if self.at("!="):
            self.i += 1
            return Neq(left, self.term())
        if self.at("in"):
            self.i += 1
            return Mem(left, self.ident("second-order variable"))
        raise self.error(f"expected '=', '!=' or 'in' after term, found {self.tok.text or 'end of input'!r}")

    def term(self) -> Term:
        name = self.ident("term")
        if self.at("("):
            return App(name, self.arguments())
        return Var(name)

    def arguments(self) -> tuple[Term, ...]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.term())
            while self.at(","):
                self.i += 1
                args.append(self.term())
        self.expect(")")
        return tuple(args)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    return _Parser(text, sig).parse()


def parse_term(text: str) -> Term:
    p = _Parser(text, None)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


_SET_SORT = re.compile(r"Set\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\Z")


def parse_context(text: str) -> tuple[Context, Context]:
    """Parse ``"x:node, N:Set(node)"`` into first- and second-order contexts."""
    fo, so = [], []
    text = text.strip()
    if not text:
        return (), ()
    for part in _split_top(text):
        name, sep, sort = part.partition(":")
        name, sort = name.strip(), sort.strip()
        if not sep or not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", name):
            raise FormulaSyntaxError(f"bad context entry {part.strip()!r}")
        m = _SET_SORT.match(sort)
        if m:
            so.append((name, m.group(1)))
        elif re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", sort):
            fo.append((name, sort))
        else:
            raise FormulaSyntaxError(f"bad sort {sort!r} in context entry {part.strip()!r}")
    return tuple(fo), tuple(so)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def context_text(fo: Context, so: Context) -> str:
    return ", ".join([f"{x}:{s}" for x, s in fo] + [f"{x}:Set({s})" for x, s in so])

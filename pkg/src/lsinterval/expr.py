"""Parser, evaluator and printer for Lie expressions.

Grammar::

    expr     := term (('+'|'-') term)*
    term     := rational '*' factor | rational | factor
    factor   := symbol | '[' expr ',' expr ']' | 'ad(' expr ')^' nat '(' expr ')'
              | 'exp_ad(' expr ')(' expr ')' | 'bch(' expr ',' expr ')'
              | 'gauge(' expr ',' expr ')' | 'diff(' expr ')' | '(' expr ')' | '-' factor
    rational := int ('/' nat)?

Whitespace is insignificant.  ``ad``, ``exp_ad``, ``bch``, ``gauge`` and
``diff`` are operators only when directly followed by ``(``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .core import Element, ad_power, add, bracket, scale
from .dgl import DglContext, apply_diff
from .errors import ParseError, TruncationMismatch, UnknownSymbol
from .series import EXP, apply_ad_series, bch, gauge

# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Sum:
    terms: Tuple["Node", ...]


@dataclass(frozen=True)
class Scaled:
    coeff: Fraction
    arg: "Node"


@dataclass(frozen=True)
class Bracket:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class AdPower:
    g: "Node"
    power: int
    arg: "Node"


@dataclass(frozen=True)
class Call:
    """Named operator: ``exp_ad`` (g, e), ``bch`` (u, v), ``gauge`` (y, z), ``diff`` (e,)."""

    op: str
    args: Tuple["Node", ...]


Node = Union[Num, Sym, Neg, Sum, Scaled, Bracket, AdPower, Call]

# -- tokenizer -------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>[0-9]+)|(?P<sym>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*/^,()\[\]])"
)
_OPERATORS = {"ad", "exp_ad", "bch", "gauge", "diff"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'sym', 'op', 'eof'
    text: str
    line: int
    column: int


def tokenize(src: str) -> List[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, src: str, ctx: Optional[DglContext]):
        self.toks = tokenize(src)
        self.i = 0
        self.ctx = ctx

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "eof" else f"token {t.text!r}"
        return ParseError(f"unexpected {what}", t.line, t.column, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail([repr(text)])
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "eof":
            raise self.fail(["'+'", "'-'", "end of input"])
        return node

    def expr(self) -> Node:
        terms = [self.term()]
        while self.at("+") or self.at("-"):
            negative = self.tok.text == "-"
            self.i += 1
            t = self.term()
            terms.append(Neg(t) if negative else t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def rational(self) -> Fraction:
        num = int(self.tok.text)
        self.i += 1
        if self.at("/"):
            self.i += 1
            if self.tok.kind != "int":
                raise self.fail(["natural number"])
            den = int(self.tok.text)
            if den == 0:
                raise ParseError("zero denominator", self.tok.line, self.tok.column)
            self.i += 1
            return Fraction(num, den)
        return Fraction(num)

    def term(self) -> Node:
        if self.tok.kind == "int":
            value = self.rational()
            if self.at("*"):
                self.i += 1
                return Scaled(value, self.factor())
            return Num(value)
        return self.factor()

    def factor(self) -> Node:
        t = self.tok
        if t.kind == "sym":
            if t.text in _OPERATORS and self.peek().kind == "op" and self.peek().text == "(":
                return self.operator()
            if self.ctx is not None:
                self.ctx.generator(t.text)
            self.i += 1
            return Sym(t.text)
        if self.at("["):
            self.i += 1
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect("]")
            return Bracket(left, right)
        if self.at("("):
            self.i += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("-"):
            self.i += 1
            return Neg(self.factor())
        raise self.fail(["symbol", "'['", "'('", "'-'", "operator"])

    def operator(self) -> Node:
        name = self.tok.text
        self.i += 1
        self.expect("(")
        if name == "ad":
            g = self.expr()
            self.expect(")")
            self.expect("^")
            if self.tok.kind != "int":
                raise self.fail(["natural number"])
            power = int(self.tok.text)
            self.i += 1
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return AdPower(g, power, arg)
        if name == "exp_ad":
            g = self.expr()
            self.expect(")")
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(name, (g, arg))
        if name == "diff":
            arg = self.expr()
            self.expect(")")
            return Call(name, (arg,))
        first = self.expr()
        self.expect(",")
        second = self.expr()
        self.expect(")")
        return Call(name, (first, second))


def parse(src: str, ctx: Optional[DglContext] = None) -> Node:
    """Parse ``src``; with a context, symbols are resolved eagerly (``UnknownSymbol``)."""
    return _Parser(src, ctx).parse()


def evaluate(node: Node, ctx: DglContext, n: Optional[int] = None) -> Element:
    """Evaluate exactly at order ``n`` (defaults to the context's order)."""
    if n is not None and n != ctx.truncation:
        if n > ctx.truncation:
            raise TruncationMismatch(
                f"context is only known to order {ctx.truncation}, requested {n}"
            )
        ctx = ctx.truncate(n)
    return _eval(node, ctx)


def _eval(node: Node, ctx: DglContext) -> Element:
    n = ctx.truncation
    if isinstance(node, Num):
        return scale(node.value, Element.unit(n))
    if isinstance(node, Sym):
        return ctx.gen(node.name)
    if isinstance(node, Neg):
        return scale(-1, _eval(node.arg, ctx))
    if isinstance(node, Sum):
        total = Element.zero(n)
        for t in node.terms:
            total = add(total, _eval(t, ctx))
        return total
    if isinstance(node, Scaled):
        return scale(node.coeff, _eval(node.arg, ctx))
    if isinstance(node, Bracket):
        return bracket(_eval(node.left, ctx), _eval(node.right, ctx))
    if isinstance(node, AdPower):
        return ad_power(_eval(node.g, ctx), node.power, _eval(node.arg, ctx))
    if isinstance(node, Call):
        args = [_eval(a, ctx) for a in node.args]
        if node.op == "exp_ad":
            return apply_ad_series(EXP, *args)
        if node.op == "bch":
            return bch(*args)
        if node.op == "gauge":
            return gauge(args[0], args[1], ctx)
        if node.op == "diff":
            return apply_diff(ctx, args[0])
    raise TypeError(f"not an expression node: {node!r}")


def evaluate_text(src: str, ctx: DglContext, n: Optional[int] = None) -> Element:
    return evaluate(parse(src, ctx), ctx, n)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_ast(node: Node) -> str:
    """Render an AST back into the grammar; ``parse(format_ast(t)) == t`` up to
    normalisation of negative literals."""
    if isinstance(node, Num):
        if node.value < 0:
            return f"-{_fmt_rational(-node.value)}"
        return _fmt_rational(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        return f"-({format_ast(node.arg)})"
    if isinstance(node, Sum):
        return "(" + " + ".join(format_ast(t) for t in node.terms) + ")"
    if isinstance(node, Scaled):
        body = f"{_fmt_rational(abs(node.coeff))}*({format_ast(node.arg)})"
        return f"-({body})" if node.coeff < 0 else body
    if isinstance(node, Bracket):
        return f"[{format_ast(node.left)}, {format_ast(node.right)}]"
    if isinstance(node, AdPower):
        return f"ad({format_ast(node.g)})^{node.power}({format_ast(node.arg)})"
    if isinstance(node, Call):
        if node.op == "exp_ad":
            return f"exp_ad({format_ast(node.args[0])})({format_ast(node.args[1])})"
        return f"{node.op}(" + ", ".join(format_ast(a) for a in node.args) + ")"
    raise TypeError(f"not an expression node: {node!r}")

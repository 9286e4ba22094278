"""
Parser for group words given on the command line.

    word   := factor ( '*'? factor )*
    factor := atom ( '^' integer )?
    atom   := 'x' N | '(' word ')' | '[' word ( ',' word )+ ']'

Brackets with more than two entries are left-normed.
"""

import re
from typing import List

from core.collect import NilElement, NilGroupCtx, left_normed, power
from core.errors import InvalidArgumentError

_TOKEN = re.compile(r"\s*(x\d+|-?\d+|[\^()\[\],*])")


def tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise InvalidArgumentError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


class _WordParser:
    def __init__(self, ctx: NilGroupCtx, tokens: List[str], text: str):
        self.ctx = ctx
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ""

    def take(self, expected: str = "") -> str:
        tok = self.peek()
        if not tok or (expected and tok != expected):
            want = repr(expected) if expected else "more input"
            raise InvalidArgumentError(f"expected {want} at token {self.pos} of {self.text!r}")
        self.pos += 1
        return tok

    def word(self) -> NilElement:
        result = self.ctx.identity()
        while self.peek() and self.peek() not in (")", "]", ","):
            if self.peek() == "*":
                self.take("*")
            result = result * self.factor()
        return result

    def factor(self) -> NilElement:
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            exponent = self.take()
            if not re.fullmatch(r"-?\d+", exponent):
                raise InvalidArgumentError(f"exponent must be an integer, got {exponent!r}")
            base = power(base, int(exponent))
        return base

    def atom(self) -> NilElement:
        tok = self.take()
        if tok.startswith("x"):
            return self.ctx.generator(int(tok[1:]))
        if tok == "(":
            inner = self.word()
            self.take(")")
            return inner
        if tok == "[":
            parts = [self.word()]
            while self.peek() == ",":
                self.take(",")
                parts.append(self.word())
            self.take("]")
            return left_normed(parts)
        raise InvalidArgumentError(f"unexpected token {tok!r} in {self.text!r}")


def parse_word(text: str, ctx: NilGroupCtx) -> NilElement:
    """
    Evaluate a word such as `x1^2 [x2,x1]^-1 (x1 x2)^3` in ctx.

    Raises:
        InvalidArgumentError: On malformed input or letters outside the context
    """
    parser = _WordParser(ctx, tokenize(text), text)
    result = parser.word()
    if parser.peek():
        raise InvalidArgumentError(f"trailing input {parser.peek()!r} in {text!r}")
    return result


def format_normal_form(a: NilElement) -> str:
    """Render b_1^e_1 ... b_N^e_N using bracket notation, `1` for the identity."""
    factors: List[str] = []
    for index, e in enumerate(a.exponents):
        if not e:
            continue
        name = str(a.ctx.basis[index])
        factors.append(name if e == 1 else f"{name}^{e}")
    return " ".join(factors) if factors else "1"

"""
Text notation for quasi-periodic continued fractions.

    cf      := '[' list? ( ';' period '@' 'k' '=' int '..' )? ']'
    list    := int ( ',' int )*
    period  := expr ( ',' expr )*
    expr    := term ( ('+' | '-') term )*
    term    := power ( ('*' | '/') power )*
    power   := atom ( '^' atom )?
    atom    := int | 'k' | '(' expr ')'

Integers may carry a leading minus sign wherever an ``int`` or ``atom`` is
expected. Examples::

    [2; 1, 2*k, 1 @ k=1..]     e
    [1, 2, 3]                   a finite fraction
    [; 7*3^k @ k=1..]           no prefix

``format_cf`` is the inverse: ``parse_cf(format_cf(x)) == x``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from cfleap.cf.expr import K, BinOp, Expr, Num, Var
from cfleap.errors import ParseError

if TYPE_CHECKING:
    from cfleap.cf.quasi import QuasiPeriodicCF

# ──────────────────────────────────────────────
# Tokenizer
# ──────────────────────────────────────────────

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<dots>\.\.)|(?P<var>k)|(?P<punct>[\[\];,@=+\-*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "dots", "var", "punct", "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            # skip whitespace to report the offending character itself
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"Unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup or "punct"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# ──────────────────────────────────────────────
# Parser
# ──────────────────────────────────────────────


class _Parser:
    """Recursive descent over the token list."""

    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _is(self, text: str) -> bool:
        return self.current.text == text and self.current.kind != "int"

    def _expect(self, text: str) -> Token:
        if not self._is(text):
            raise ParseError(
                f"Unexpected {self._describe(self.current)}",
                self.current.position,
                repr(text),
            )
        return self._advance()

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else repr(token.text)

    def _starts_int(self) -> bool:
        if self.current.kind == "int":
            return True
        return self._is("-") and self._peek().kind == "int"

    def _int(self) -> int:
        sign = 1
        if self._is("-") and self._peek().kind == "int":
            self._advance()
            sign = -1
        if self.current.kind != "int":
            raise ParseError(
                f"Unexpected {self._describe(self.current)}",
                self.current.position,
                "integer",
            )
        return sign * int(self._advance().text)

    # Grammar rules ---------------------------------------------------

    def parse_cf(self) -> QuasiPeriodicCF:
        from cfleap.cf.quasi import QuasiPeriodicCF  # noqa: F811

        self._expect("[")
        prefix: list[int] = []
        if self._starts_int():
            prefix.append(self._int())
            while self._is(","):
                self._advance()
                prefix.append(self._int())
        period: list[Expr] = []
        start = 0
        if self._is(";"):
            self._advance()
            period.append(self.parse_expr())
            while self._is(","):
                self._advance()
                period.append(self.parse_expr())
            self._expect("@")
            if self.current.kind != "var":
                raise ParseError(
                    f"Unexpected {self._describe(self.current)}",
                    self.current.position,
                    "'k'",
                )
            self._advance()
            self._expect("=")
            start = self._int()
            self._expect("..")
        self._expect("]")
        if self.current.kind != "end":
            raise ParseError(
                f"Trailing {self._describe(self.current)}",
                self.current.position,
                "end of input",
            )
        return QuasiPeriodicCF(tuple(prefix), tuple(period), start)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self._is("+") or self._is("-"):
            op = self._advance().text
            node = BinOp(op, node, self.parse_term())  # type: ignore[arg-type]
        return node

    def parse_term(self) -> Expr:
        node = self.parse_power()
        while self._is("*") or self._is("/"):
            op = self._advance().text
            node = BinOp(op, node, self.parse_power())  # type: ignore[arg-type]
        return node

    def parse_power(self) -> Expr:
        node = self.parse_atom()
        if self._is("^"):
            self._advance()
            node = BinOp("^", node, self.parse_atom())
        return node

    def parse_atom(self) -> Expr:
        if self._starts_int():
            return Num(self._int())
        if self.current.kind == "var":
            self._advance()
            return K
        if self._is("("):
            self._advance()
            node = self.parse_expr()
            self._expect(")")
            return node
        raise ParseError(
            f"Unexpected {self._describe(self.current)}",
            self.current.position,
            "integer, 'k' or '('",
        )


def parse_cf(text: str) -> QuasiPeriodicCF:
    """Parse the CF notation into a QuasiPeriodicCF."""
    return _Parser(text).parse_cf()


def parse_expr(text: str) -> Expr:
    """Parse a single coefficient expression."""
    parser = _Parser(text)
    node = parser.parse_expr()
    if parser.current.kind != "end":
        raise ParseError(
            f"Trailing {parser._describe(parser.current)}",
            parser.current.position,
            "end of input",
        )
    return node


# ──────────────────────────────────────────────
# Formatter
# ──────────────────────────────────────────────

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_ATOM = 4


def _level(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _PRECEDENCE[expr.op]
    return _ATOM


def format_expr(expr: Expr) -> str:
    """Render with the fewest parentheses that still parse back to *expr*."""
    if isinstance(expr, Num):
        return str(expr.value)
    if isinstance(expr, Var):
        return "k"
    assert isinstance(expr, BinOp)
    level = _PRECEDENCE[expr.op]
    if expr.op == "^":
        # both operands of ^ are atoms
        left = _wrap(expr.left, _level(expr.left) < _ATOM)
        right = _wrap(expr.right, _level(expr.right) < _ATOM)
        return f"{left}^{right}"
    left = _wrap(expr.left, _level(expr.left) < level)
    # left-associative: an equal-precedence right operand needs parentheses
    right = _wrap(expr.right, _level(expr.right) <= level)
    spaced = expr.op in "+-"
    return f"{left} {expr.op} {right}" if spaced else f"{left}{expr.op}{right}"


def _wrap(expr: Expr, needed: bool) -> str:
    text = format_expr(expr)
    return f"({text})" if needed else text


def format_cf(qp: QuasiPeriodicCF) -> str:
    prefix = ", ".join(str(q) for q in qp.prefix)
    if not qp.period:
        return f"[{prefix}]"
    period = ", ".join(format_expr(e) for e in qp.period)
    lead = f"{prefix}; " if prefix else "; "
    return f"[{lead}{period} @ k={qp.start}..]"

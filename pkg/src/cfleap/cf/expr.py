"""
Coefficient expressions in one variable k.

Quasi-periodic continued fractions describe their repeating quotients with
small integer expressions such as ``2*k + 1`` or ``3*5^k``. Trees are frozen
dataclasses, so two expressions compare equal exactly when they are
structurally identical. Evaluation is exact: ``/`` must divide evenly and
``^`` needs a nonnegative exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from cfleap.errors import NonIntegerCoefficient

Op = Literal["+", "-", "*", "/", "^"]

# Parity of a value for (k even, k odd); None means undecided.
ParityPair = tuple[int | None, int | None]


class Expr:
    """Base class; arithmetic operators build trees."""

    def evaluate(self, k: int) -> int:
        raise NotImplementedError

    def substitute(self, replacement: Expr) -> Expr:
        """Replace every occurrence of k with *replacement*."""
        raise NotImplementedError

    def has_var(self) -> bool:
        raise NotImplementedError

    def parity(self, start: int = 0) -> ParityPair:
        """Parity of the value for k ≥ start, split by the parity of k."""
        raise NotImplementedError

    def affine(self) -> tuple[int, int] | None:
        """(slope, intercept) if the expression is affine in k, else None."""
        raise NotImplementedError

    def is_nondecreasing(self) -> bool:
        """Conservative syntactic check that the value never drops as k grows."""
        raise NotImplementedError

    # Tree builders ---------------------------------------------------

    def __add__(self, other: Expr | int) -> Expr:
        return BinOp("+", self, _lift(other))

    def __radd__(self, other: int) -> Expr:
        return BinOp("+", _lift(other), self)

    def __sub__(self, other: Expr | int) -> Expr:
        return BinOp("-", self, _lift(other))

    def __rsub__(self, other: int) -> Expr:
        return BinOp("-", _lift(other), self)

    def __mul__(self, other: Expr | int) -> Expr:
        return BinOp("*", self, _lift(other))

    def __rmul__(self, other: int) -> Expr:
        return BinOp("*", _lift(other), self)

    def __truediv__(self, other: Expr | int) -> Expr:
        return BinOp("/", self, _lift(other))

    def __xor__(self, other: Expr | int) -> Expr:
        return BinOp("^", self, _lift(other))

    def __str__(self) -> str:
        from cfleap.cf.dsl import format_expr

        return format_expr(self)


def _lift(value: Expr | int) -> Expr:
    return value if isinstance(value, Expr) else Num(value)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: int

    def evaluate(self, k: int) -> int:
        return self.value

    def substitute(self, replacement: Expr) -> Expr:
        return self

    def has_var(self) -> bool:
        return False

    def parity(self, start: int = 0) -> ParityPair:
        return (self.value % 2, self.value % 2)

    def affine(self) -> tuple[int, int] | None:
        return (0, self.value)

    def is_nondecreasing(self) -> bool:
        return True


@dataclass(frozen=True, eq=True)
class Var(Expr):
    """The single variable k."""

    def evaluate(self, k: int) -> int:
        return k

    def substitute(self, replacement: Expr) -> Expr:
        return replacement

    def has_var(self) -> bool:
        return True

    def parity(self, start: int = 0) -> ParityPair:
        return (0, 1)

    def affine(self) -> tuple[int, int] | None:
        return (1, 0)

    def is_nondecreasing(self) -> bool:
        return True


K = Var()


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: Op
    left: Expr
    right: Expr

    def evaluate(self, k: int) -> int:
        x = self.left.evaluate(k)
        y = self.right.evaluate(k)
        if self.op == "+":
            return x + y
        if self.op == "-":
            return x - y
        if self.op == "*":
            return x * y
        if self.op == "/":
            if y == 0:
                raise NonIntegerCoefficient(f"Division by zero in {self} at k={k}")
            q, r = divmod(x, y)
            if r:
                raise NonIntegerCoefficient(
                    f"{self} is not an integer at k={k} ({x}/{y})"
                )
            return q
        if y < 0:
            raise NonIntegerCoefficient(f"Negative exponent in {self} at k={k}")
        return x**y

    def substitute(self, replacement: Expr) -> Expr:
        return BinOp(
            self.op,
            self.left.substitute(replacement),
            self.right.substitute(replacement),
        )

    def has_var(self) -> bool:
        return self.left.has_var() or self.right.has_var()

    def parity(self, start: int = 0) -> ParityPair:
        if self.op == "/":
            return (None, None)
        if self.op == "^":
            return self._power_parity(start)
        lp = self.left.parity(start)
        rp = self.right.parity(start)
        return (_combine(self.op, lp[0], rp[0]), _combine(self.op, lp[1], rp[1]))

    def _power_parity(self, start: int) -> ParityPair:
        base = self.left.parity(start)
        exp = self.right.affine()
        if exp is None:
            return (None, None)
        slope, intercept = exp
        # even base: odd only for a zero exponent
        if slope == 0:
            even_base: int | None = 1 if intercept == 0 else 0
        elif slope > 0 and slope * start + intercept >= 1:
            even_base = 0
        else:
            even_base = None
        return (_power_of(base[0], even_base), _power_of(base[1], even_base))

    def affine(self) -> tuple[int, int] | None:
        la = self.left.affine()
        ra = self.right.affine()
        if la is None or ra is None:
            return None
        if self.op == "+":
            return (la[0] + ra[0], la[1] + ra[1])
        if self.op == "-":
            return (la[0] - ra[0], la[1] - ra[1])
        if self.op == "*":
            if la[0] and ra[0]:
                return None
            return (la[0] * ra[1] + ra[0] * la[1], la[1] * ra[1])
        return None

    def is_nondecreasing(self) -> bool:
        left_const = not self.left.has_var()
        right_const = not self.right.has_var()
        if self.op == "+":
            return self.left.is_nondecreasing() and self.right.is_nondecreasing()
        if self.op == "-":
            return self.left.is_nondecreasing() and right_const
        if self.op == "*":
            if left_const:
                return self.left.evaluate(0) >= 0 and self.right.is_nondecreasing()
            if right_const:
                return self.right.evaluate(0) >= 0 and self.left.is_nondecreasing()
            return False
        if self.op == "/":
            return (
                right_const
                and self.right.evaluate(0) > 0
                and self.left.is_nondecreasing()
            )
        # ^ : constant base ≥ 1 with a nondecreasing exponent
        return left_const and self.left.evaluate(0) >= 1 and self.right.is_nondecreasing()


def _power_of(base: int | None, even_base: int | None) -> int | None:
    if base == 1:
        return 1
    if base == 0:
        return even_base
    return None


def _combine(op: str, x: int | None, y: int | None) -> int | None:
    if op == "*":
        if x == 0 or y == 0:
            return 0
        if x == 1 and y == 1:
            return 1
        return None
    if x is None or y is None:
        return None
    return (x + y) % 2


def fold_constants(expr: Expr) -> Expr:
    """
    Collapse subtrees without k to numbers where that is exact, and drop
    ``*1``, ``/1``, ``+0`` and ``-0``.

        fold_constants((2 - 2) / 2) == Num(0)
        fold_constants((k + 1) / 2) is unchanged
    """
    if not isinstance(expr, BinOp):
        return expr
    left, right = fold_constants(expr.left), fold_constants(expr.right)
    folded = BinOp(expr.op, left, right)
    if isinstance(left, Num) and isinstance(right, Num):
        try:
            return Num(folded.evaluate(0))
        except NonIntegerCoefficient:
            return folded
    if isinstance(right, Num):
        if right.value == 1 and expr.op in ("*", "/", "^"):
            return left
        if right.value == 0 and expr.op in ("+", "-"):
            return left
    if isinstance(left, Num):
        if left.value == 1 and expr.op == "*":
            return right
        if left.value == 0 and expr.op == "+":
            return right
    return folded

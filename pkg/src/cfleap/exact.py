"""
Exact 2×2 integer matrices and the linear fractional transforms they act as.

A matrix [[A, B], [C, D]] acts on x as (A·x + B)/(C·x + D). Multiplication
is composition; the only letters used by continued fractions are

    R = [[1, 1], [0, 1]]   (x ↦ x + 1)
    L = [[1, 0], [1, 1]]   (x ↦ x/(x + 1))

so that [a₀; a₁, a₂, …] corresponds to R^a₀ · L^a₁ · R^a₂ · ….
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from cfleap.errors import BadDeterminant, PoleError


@dataclass(frozen=True, slots=True)
class Matrix2x2:
    """Immutable integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    def __mul__(self, other: Matrix2x2) -> Matrix2x2:
        if not isinstance(other, Matrix2x2):
            return NotImplemented
        return Matrix2x2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, h: int) -> Matrix2x2:
        base = self if h >= 0 else self.inverse()
        result = IDENTITY
        e = abs(h)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def columns(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.c), (self.b, self.d))

    def inverse(self) -> Matrix2x2:
        """Exact integer inverse; only unimodular matrices have one."""
        det = self.det
        if det not in (1, -1):
            raise BadDeterminant(f"{self} has det {det}; integer inverse needs ±1")
        return Matrix2x2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Matrix2x2(1, 0, 0, 1)
M = Matrix2x2(1, 1, 1, -1)
R = Matrix2x2(1, 1, 0, 1)
L = Matrix2x2(1, 0, 1, 1)
J = Matrix2x2(0, 1, 1, 0)

# Residual matrices of the det ±2 rewriting.
AUX_A = Matrix2x2(0, 2, 1, 0)
AUX_B = Matrix2x2(0, 1, 2, 0)
AUX_C = Matrix2x2(0, 2, 1, 1)

# Word letters; only R and L take exponents other than 1.
LETTERS: dict[str, Matrix2x2] = {
    "R": R,
    "L": L,
    "M": M,
    "J": J,
    "A": AUX_A,
    "B": AUX_B,
    "C": AUX_C,
}

Word = list[tuple[str, int]]


def mat_mul(x: Matrix2x2, y: Matrix2x2) -> Matrix2x2:
    return x * y


def mat_det(x: Matrix2x2) -> int:
    return x.det


def r_power(h: int) -> Matrix2x2:
    """R^h for any integer h."""
    return Matrix2x2(1, h, 0, 1)


def l_power(h: int) -> Matrix2x2:
    """L^h for any integer h."""
    return Matrix2x2(1, 0, h, 1)


def mat_pow(x: Matrix2x2, h: int) -> Matrix2x2:
    if x == R:
        return r_power(h)
    if x == L:
        return l_power(h)
    return x**h


def rl_word_to_matrix(word: Iterable[tuple[str, int]]) -> Matrix2x2:
    """
    Multiply out a word of (letter, exponent) pairs.

    R and L take nonnegative exponents; every other letter only exponent 1.
    """
    result = IDENTITY
    for letter, exponent in word:
        if letter not in LETTERS:
            raise ValueError(f"Unknown letter '{letter}'. Known: {sorted(LETTERS)}")
        if letter in ("R", "L"):
            if exponent < 0:
                raise ValueError(f"Negative exponent {exponent} on {letter}")
            result = result * mat_pow(LETTERS[letter], exponent)
        else:
            if exponent != 1:
                raise ValueError(f"Letter {letter} only takes exponent 1")
            result = result * LETTERS[letter]
    return result


def cf_word(quotients: Iterable[int]) -> Word:
    """Alternating R/L word of a quotient sequence, starting with R."""
    return [("R" if i % 2 == 0 else "L", q) for i, q in enumerate(quotients)]


@dataclass(frozen=True, slots=True)
class LFT:
    """A linear fractional transform with nonzero determinant."""

    mat: Matrix2x2

    def __post_init__(self) -> None:
        if self.mat.det == 0:
            raise BadDeterminant(f"{self.mat} is singular")

    @property
    def det(self) -> int:
        return self.mat.det

    def apply(self, x: Fraction | int) -> Fraction:
        return lft_apply(self, x)

    def compose(self, other: LFT) -> LFT:
        return LFT(self.mat * other.mat)

    def __str__(self) -> str:
        return str(self.mat)


def lft_apply(sigma: LFT, x: Fraction | int) -> Fraction:
    """Evaluate σ(x) exactly; raise PoleError where the denominator vanishes."""
    m = sigma.mat
    x = Fraction(x)
    num = m.a * x + m.b
    den = m.c * x + m.d
    if den == 0:
        raise PoleError(f"{sigma} has a pole at {x}")
    return num / den


def lft_at_infinity(sigma: LFT) -> Fraction:
    """σ(∞) = A/C."""
    if sigma.mat.c == 0:
        raise PoleError(f"{sigma} maps ∞ to ∞")
    return Fraction(sigma.mat.a, sigma.mat.c)


def parse_lft(text: str) -> LFT:
    """Parse "A,B,C,D" (row-major) into an LFT."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"Expected four comma-separated integers, got '{text}'")
    try:
        a, b, c, d = (int(p) for p in parts)
    except ValueError as e:
        raise ValueError(f"Non-integer matrix entry in '{text}'") from e
    return LFT(Matrix2x2(a, b, c, d))

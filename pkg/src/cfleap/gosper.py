"""
Streaming evaluation of σ(x) on continued fractions.

The transform keeps a state matrix Q = [[a, b], [c, d]] standing for
z ↦ (a·z + b)/(c·z + d) on the unread tail z of the input. Absorbing a
quotient q replaces z by q + 1/z′; emitting an output quotient q replaces
the output tail y by q + 1/y′. An output quotient is safe to emit once the
image of the whole interval z ∈ [1, ∞] has a single integer part.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice

from cfleap.cf.stream import QuotientStream
from cfleap.config import STALL_BOUND
from cfleap.exact import LFT, Matrix2x2
from cfleap.errors import PoleError, StalledError, StreamExhausted

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────
# Rational helpers
# ──────────────────────────────────────────────


def rational_to_cf(x: Fraction | int) -> list[int]:
    """Canonical expansion of a rational by Euclid's algorithm."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    quotients: list[int] = []
    while den:
        q, r = divmod(num, den)
        quotients.append(q)
        num, den = den, r
    return quotients


def cf_value(quotients: Sequence[int]) -> Fraction:
    """Exact value of a finite continued fraction."""
    if not quotients:
        raise StreamExhausted("Empty continued fraction has no value")
    value = Fraction(quotients[-1])
    for q in reversed(quotients[:-1]):
        if value == 0:
            raise PoleError(f"Zero denominator while evaluating {list(quotients)}")
        value = q + 1 / value
    return value


def canonicalize(quotients: Sequence[int]) -> list[int]:
    """
    Canonical form of a finite expansion: interior zero quotients are
    folded ([…, a, 0, b, …] → […, a + b, …]) and a trailing 1 is merged
    into its predecessor. The value is unchanged.
    """
    out: list[int] = []
    pending_zero = False
    for i, q in enumerate(quotients):
        if i >= 1 and q == 0:
            # two consecutive zeros cancel
            pending_zero = not pending_zero
            continue
        if pending_zero and out:
            out[-1] += q
            pending_zero = False
            continue
        out.append(q)
    if pending_zero and len(out) >= 2:
        # […, b, 0] has the value of […]
        out.pop()
    if len(out) >= 2 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


# ──────────────────────────────────────────────
# Transducer
# ──────────────────────────────────────────────


@dataclass
class GosperState:
    a: int
    b: int
    c: int
    d: int
    absorbed: int = 0
    emitted: int = 0

    @classmethod
    def from_lft(cls, sigma: LFT) -> GosperState:
        m = sigma.mat
        return cls(m.a, m.b, m.c, m.d)

    @property
    def matrix(self) -> Matrix2x2:
        return Matrix2x2(self.a, self.b, self.c, self.d)

    def absorb(self, q: int) -> None:
        self.a, self.b, self.c, self.d = (
            self.a * q + self.b,
            self.a,
            self.c * q + self.d,
            self.c,
        )
        self.absorbed += 1

    def emit(self, q: int) -> None:
        self.a, self.b, self.c, self.d = (
            self.c,
            self.d,
            self.a - q * self.c,
            self.b - q * self.d,
        )
        self.emitted += 1

    def ready_digit(self) -> int | None:
        """The next output quotient if the interval [1, ∞] pins it down."""
        if self.absorbed == 0:
            return None
        lo_den = self.c + self.d
        if self.c == 0 or lo_den == 0 or (self.c > 0) != (lo_den > 0):
            return None
        at_inf = self.a // self.c
        at_one = (self.a + self.b) // lo_den
        return at_inf if at_inf == at_one else None

    def remaining_value(self) -> Fraction | None:
        """a/c, the value once the input is exhausted (None at a pole)."""
        if self.c == 0:
            return None
        return Fraction(self.a, self.c)


def _transform(
    sigma: LFT, source: Iterable[int], stall_bound: int
) -> Iterator[int]:
    state = GosperState.from_lft(sigma)
    it = iter(source)
    idle = 0
    while True:
        digit = state.ready_digit()
        if digit is not None:
            state.emit(digit)
            idle = 0
            yield digit
            continue
        try:
            q = next(it)
        except StopIteration:
            break
        state.absorb(q)
        idle += 1
        if idle > stall_bound:
            raise StalledError(
                f"{idle} quotients absorbed without an emission "
                f"(state {state.matrix})"
            )

    if state.absorbed == 0:
        raise StreamExhausted("Cannot transform an empty continued fraction")
    rest = state.remaining_value()
    if rest is None:
        if state.emitted == 0:
            raise PoleError(f"{sigma} maps the input to ∞")
        logger.debug("Finite input ended exactly after %d digits", state.emitted)
        return
    logger.debug(
        "Finite input exhausted after %d absorptions, %d emissions; remainder %s",
        state.absorbed,
        state.emitted,
        rest,
    )
    yield from rational_to_cf(rest)


def apply_lft_stream(
    sigma: LFT,
    quotients: Iterable[int],
    max_terms: int | None = None,
    *,
    stall_bound: int = STALL_BOUND,
) -> QuotientStream:
    """
    Lazily stream the quotients of σ(x).

    The first output quotient may be zero or negative; all later ones are
    ≥ 1. A finite input yields the canonical expansion of the rational
    σ(x); an input at σ's pole raises PoleError.
    """
    out: Iterator[int] = _transform(sigma, quotients, stall_bound)
    if max_terms is not None:
        out = islice(out, max_terms)
    return QuotientStream(out)


def apply_lft_finite(sigma: LFT, quotients: Sequence[int]) -> list[int]:
    """σ applied to a finite expansion, routed through canonicalize."""
    return canonicalize(list(_transform(sigma, quotients, STALL_BOUND)))


def shares_tail(
    left: Sequence[int], right: Sequence[int], horizon: int
) -> tuple[int, int] | None:
    """
    Smallest (i, j) with left[i + t] == right[j + t] for t < horizon,
    searching i + j in increasing order; None if no such pair exists
    within the given lists.
    """
    for total in range(len(left) + len(right)):
        for i in range(total + 1):
            j = total - i
            if i + horizon > len(left) or j + horizon > len(right):
                continue
            if left[i : i + horizon] == right[j : j + horizon]:
                return (i, j)
    return None

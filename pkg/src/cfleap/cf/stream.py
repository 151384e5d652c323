"""
Partial-quotient streams.

A stream is a single-consumer iterator of integers [a₀, a₁, …] with a₀ any
integer and aᵢ ≥ 1 afterwards. Streams may be finite (rationals) or
unbounded. ``Replay`` buffers a stream for random access and repeated reads.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice

from cfleap.errors import NonPositiveQuotient, PoleError, StreamExhausted


class QuotientStream(Iterator[int]):
    """Validating single-consumer iterator over partial quotients."""

    def __init__(self, source: Iterable[int], *, first_index: int = 0) -> None:
        self._it = iter(source)
        self._index = first_index

    def __iter__(self) -> QuotientStream:
        return self

    def __next__(self) -> int:
        q = next(self._it)
        if self._index >= 1 and q < 1:
            raise NonPositiveQuotient(f"a_{self._index} = {q} (must be ≥ 1)")
        self._index += 1
        return q

    @property
    def consumed(self) -> int:
        return self._index

    def take(self, n: int) -> list[int]:
        """Up to n further quotients (fewer if the stream ends)."""
        return list(islice(self, n))


class Replay:
    """
    Buffering wrapper over a quotient stream.

    Indexing pulls from the source on demand; reading past the end of a
    finite source raises StreamExhausted.
    """

    def __init__(self, source: Iterable[int]) -> None:
        self._source = iter(source)
        self._buffer: list[int] = []
        self._finished = False

    def _fill(self, n: int) -> None:
        while len(self._buffer) < n and not self._finished:
            try:
                self._buffer.append(next(self._source))
            except StopIteration:
                self._finished = True

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(f"Negative quotient index {i}")
        self._fill(i + 1)
        if i >= len(self._buffer):
            raise StreamExhausted(
                f"Stream ended after {len(self._buffer)} terms (asked for a_{i})"
            )
        return self._buffer[i]

    def available(self, n: int) -> bool:
        """True if the stream has at least n terms."""
        self._fill(n)
        return len(self._buffer) >= n

    def prefix(self, n: int) -> list[int]:
        if not self.available(n):
            raise StreamExhausted(
                f"Stream has {len(self._buffer)} terms, {n} requested"
            )
        return self._buffer[:n]

    def window(self, start: int, n: int) -> list[int]:
        """Up to n quotients from index *start* (fewer if the stream ends)."""
        self._fill(start + n)
        return self._buffer[start : start + n]

    @property
    def buffered(self) -> int:
        return len(self._buffer)

    @property
    def finished(self) -> bool:
        return self._finished

    def replay(self) -> QuotientStream:
        """A fresh stream that rereads from a₀."""

        def gen() -> Iterator[int]:
            i = 0
            while True:
                try:
                    yield self[i]
                except StreamExhausted:
                    return
                i += 1

        return QuotientStream(gen())


@dataclass(frozen=True)
class Convergent:
    """Unreduced convergent p/q as produced by the recurrence."""

    p: int
    q: int

    @property
    def value(self) -> Fraction:
        if self.q == 0:
            raise PoleError(f"Convergent {self.p}/0")
        return Fraction(self.p, self.q)


def convergent_pairs(quotients: Iterable[int], n: int) -> list[tuple[int, int]]:
    """
    (pᵢ, qᵢ) for i = 0..n from p₋₁ = 1, q₋₁ = 0, p₋₂ = 0, q₋₂ = 1.

    Raises StreamExhausted if fewer than n + 1 quotients are available.
    """
    if n < 0:
        raise ValueError(f"n must be ≥ 0, got {n}")
    pairs: list[tuple[int, int]] = []
    p_prev, q_prev = 1, 0
    p_prev2, q_prev2 = 0, 1
    for a in islice(quotients, n + 1):
        p, q = a * p_prev + p_prev2, a * q_prev + q_prev2
        pairs.append((p, q))
        p_prev2, q_prev2, p_prev, q_prev = p_prev, q_prev, p, q
    if len(pairs) < n + 1:
        raise StreamExhausted(f"Need {n + 1} quotients, stream had {len(pairs)}")
    return pairs


def convergents(quotients: Iterable[int] | Replay, n: int) -> list[Convergent]:
    """Convergents p₀/q₀ … pₙ/qₙ of a stream."""
    source = quotients.replay() if isinstance(quotients, Replay) else quotients
    return [Convergent(p, q) for p, q in convergent_pairs(source, n)]


def tail(quotients: Iterable[int], n: int) -> QuotientStream:
    """
    The stream a_{n+1}, a_{n+2}, … .

    Requires at least n + 2 quotients; the first n + 1 are consumed.
    """
    if n < 0:
        raise ValueError(f"n must be ≥ 0, got {n}")
    it = iter(quotients)
    skipped = list(islice(it, n + 1))
    if len(skipped) < n + 1:
        raise StreamExhausted(f"Stream has {len(skipped)} terms, tail after a_{n}")
    try:
        first = next(it)
    except StopIteration:
        raise StreamExhausted(f"Stream ends at a_{n}; tail is empty") from None

    def gen() -> Iterator[int]:
        yield first
        yield from it

    return QuotientStream(gen(), first_index=n + 1)

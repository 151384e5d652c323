"""
Quasi-periodic continued fractions: a finite prefix followed by a period of
coefficient expressions in k, evaluated for k = start, start + 1, … .

    [2; 1, 2*k, 1 @ k=1..]  =  [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, …]
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import count, islice

from cfleap.cf.expr import Expr
from cfleap.cf.stream import QuotientStream
from cfleap.errors import NonPositiveQuotient


@dataclass(frozen=True)
class QuasiPeriodicCF:
    prefix: tuple[int, ...] = ()
    period: tuple[Expr, ...] = ()
    start: int = 0

    def __post_init__(self) -> None:
        for i, q in enumerate(self.prefix):
            if i >= 1 and q < 1:
                raise NonPositiveQuotient(f"Prefix quotient a_{i} = {q} (must be ≥ 1)")
        # Finite fractions are stored canonically: [..., a, 1] becomes [..., a+1].
        if not self.period and len(self.prefix) >= 2 and self.prefix[-1] == 1:
            folded = self.prefix[:-2] + (self.prefix[-2] + 1,)
            object.__setattr__(self, "prefix", folded)

    @property
    def is_finite(self) -> bool:
        return not self.period

    def period_values(self, k: int) -> list[int]:
        """The period's quotients at one value of k."""
        values = [expr.evaluate(k) for expr in self.period]
        for j, v in enumerate(values):
            if v < 1 and (self.prefix or k > self.start or j > 0):
                raise NonPositiveQuotient(f"{self.period[j]} = {v} at k={k}")
        return values

    def quotient(self, i: int) -> int:
        """Random access to aᵢ."""
        if i < 0:
            raise IndexError(f"Negative quotient index {i}")
        if i < len(self.prefix):
            return self.prefix[i]
        if not self.period:
            raise IndexError(f"Finite fraction has {len(self.prefix)} terms")
        offset = i - len(self.prefix)
        k, j = divmod(offset, len(self.period))
        return self.period_values(self.start + k)[j]

    def _generate(self) -> Iterator[int]:
        yield from self.prefix
        if not self.period:
            return
        for k in count(self.start):
            yield from self.period_values(k)

    def stream(self) -> QuotientStream:
        return QuotientStream(self._generate())

    def __str__(self) -> str:
        from cfleap.cf.dsl import format_cf

        return format_cf(self)


def qp_evaluate(qp: QuasiPeriodicCF, count: int | None = None) -> QuotientStream:
    """
    Emit the prefix, then the period at k = start, start + 1, …; stop after
    *count* terms when given (or when a finite fraction ends).
    """
    if count is None:
        return qp.stream()
    if count < 0:
        raise ValueError(f"count must be ≥ 0, got {count}")
    return QuotientStream(islice(qp._generate(), count))

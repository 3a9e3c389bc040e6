"""Exact arithmetic on the two supported complete MV-chains.

``MVAlgebra("real", k)`` is the interval [0, k] over rationals and
``MVAlgebra("chain", k)`` the finite chain {0, ..., k}.  Both use truncated
addition and subtraction; the natural order is the usual numeric order.

Raw values are :class:`fractions.Fraction` (real) or ``int`` (chain).  The
algebra object does arithmetic on raw values so valuations can store plain
numbers; :class:`MVValue` is the checked, algebra-tagged wrapper.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

Number = Union[int, Fraction]

REAL = "real"
CHAIN = "chain"


class AlgebraMismatch(ValueError):
    pass


_RATIONAL = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")
_DECIMAL = re.compile(r"^\s*-?(\d+(\.\d*)?|\.\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"2/3"`` or ``"0.25"`` into an exact Fraction."""
    m = _RATIONAL.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    if _DECIMAL.match(text):
        return Fraction(text.strip())
    raise ValueError(f"not a rational literal: {text!r}")


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True)
class MVAlgebra:
    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in (REAL, CHAIN):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise ValueError(f"top must be a positive integer, got {self.k!r}")

    @property
    def top(self) -> Number:
        return Fraction(self.k) if self.kind == REAL else self.k

    @property
    def bottom(self) -> Number:
        return Fraction(0) if self.kind == REAL else 0

    def coerce(self, x) -> Number:
        """Convert ``x`` to a raw value of this algebra, rejecting out-of-range input."""
        if isinstance(x, MVValue):
            if x.algebra != self:
                raise AlgebraMismatch(f"{x.algebra} value used in {self}")
            return x.value
        if isinstance(x, str):
            x = parse_rational(x)
        if isinstance(x, float):
            raise TypeError("floating point values are not accepted; use Fraction or 'p/q'")
        if self.kind == REAL:
            v = Fraction(x)
        else:
            v = Fraction(x)
            if v.denominator != 1:
                raise ValueError(f"{format_number(v)} is not an element of {{0..{self.k}}}")
            v = int(v)
        if v < 0 or v > self.k:
            raise ValueError(f"{format_number(v)} outside [0, {self.k}]")
        return v

    def contains(self, x) -> bool:
        try:
            self.coerce(x)
        except (ValueError, TypeError):
            return False
        return True

    # raw-value arithmetic

    def oplus(self, x: Number, y: Number) -> Number:
        return min(x + y, self.top)

    def ominus(self, x: Number, y: Number) -> Number:
        return max(x - y, self.bottom)

    def complement(self, x: Number) -> Number:
        return self.top - x

    def join(self, x: Number, y: Number) -> Number:
        return self.oplus(self.ominus(x, y), y)

    def meet(self, x: Number, y: Number) -> Number:
        return self.ominus(x, self.ominus(x, y))

    def sup(self, xs: Iterable[Number]) -> Number:
        return reduce(self.join, xs, self.bottom)

    def inf(self, xs: Iterable[Number]) -> Number:
        return reduce(self.meet, xs, self.top)

    def elements(self) -> list[int]:
        if self.kind != CHAIN:
            raise ValueError("only finite chains can be enumerated")
        return list(range(self.k + 1))

    def value(self, x) -> "MVValue":
        return MVValue(self.coerce(x), self)

    def __str__(self) -> str:
        return f"{self.kind} {self.k}"


@dataclass(frozen=True, order=False)
class MVValue:
    value: Number
    algebra: MVAlgebra

    def __post_init__(self):
        v = self.value
        if v < 0 or v > self.algebra.k:
            raise ValueError(f"{format_number(v)} outside [0, {self.algebra.k}]")

    def _same(self, other: "MVValue") -> MVAlgebra:
        if not isinstance(other, MVValue):
            raise TypeError(f"expected MVValue, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"cannot combine values of {self.algebra} and {other.algebra}")
        return self.algebra

    def __le__(self, other: "MVValue") -> bool:
        self._same(other)
        return self.value <= other.value

    def __lt__(self, other: "MVValue") -> bool:
        self._same(other)
        return self.value < other.value

    def __ge__(self, other: "MVValue") -> bool:
        return other <= self

    def __gt__(self, other: "MVValue") -> bool:
        return other < self

    def __str__(self) -> str:
        return format_number(self.value)


def oplus(x: MVValue, y: MVValue) -> MVValue:
    alg = x._same(y)
    return MVValue(alg.oplus(x.value, y.value), alg)


def ominus(x: MVValue, y: MVValue) -> MVValue:
    alg = x._same(y)
    return MVValue(alg.ominus(x.value, y.value), alg)


def complement(x: MVValue) -> MVValue:
    return MVValue(x.algebra.complement(x.value), x.algebra)


def join(x: MVValue, y: MVValue) -> MVValue:
    alg = x._same(y)
    return MVValue(alg.join(x.value, y.value), alg)


def meet(x: MVValue, y: MVValue) -> MVValue:
    alg = x._same(y)
    return MVValue(alg.meet(x.value, y.value), alg)


def leq(x: MVValue, y: MVValue) -> bool:
    return x <= y


def top(alg: MVAlgebra) -> MVValue:
    return MVValue(alg.top, alg)


def bottom(alg: MVAlgebra) -> MVValue:
    return MVValue(alg.bottom, alg)

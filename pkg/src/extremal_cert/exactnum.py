"""Exact number tower: rationals, quadratic surds, pi^2 multiples, rational intervals.

Rationals are :class:`fractions.Fraction`, which already keeps numerator and
denominator coprime with a positive denominator.  Everything here is exact;
``pi`` only ever appears through :func:`pi_enclosure` or as a symbolic unit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ConfigError

ExactRational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def q(value: RationalLike | str) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction (floats refused)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"refusing inexact value {value!r}; pass an int, Fraction or 'p/q'")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ConfigError(f"not a rational of the form p/q: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ConfigError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Canonical "p/q" serialization (always with an explicit denominator)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def sign(value: RationalLike) -> int:
    return (value > 0) - (value < 0)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, r) with n == s*s*r and r squarefree.  ``n`` must be positive."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, r = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            r *= d
        d += 1 if d == 2 else 2
    r *= n
    return s, r


@dataclass(frozen=True)
class SurdQuantity:
    """The real number ``coefficient * sqrt(radicand)`` with squarefree radicand."""

    coefficient: Fraction
    radicand: int = 1

    def __post_init__(self) -> None:
        coeff = q(self.coefficient)
        rad = int(self.radicand)
        if coeff == 0:
            rad = 1
        else:
            s, rad = squarefree_decompose(rad)
            coeff *= s
        object.__setattr__(self, "coefficient", coeff)
        object.__setattr__(self, "radicand", rad)

    @classmethod
    def sqrt_of(cls, value: RationalLike) -> "SurdQuantity":
        """sqrt(p/q) written as (1/q)*sqrt(p*q)."""
        value = q(value)
        if value < 0:
            raise ValueError("square root of a negative rational")
        if value == 0:
            return cls(Fraction(0))
        return cls(Fraction(1, value.denominator), value.numerator * value.denominator)

    def square(self) -> Fraction:
        return self.coefficient * self.coefficient * self.radicand

    def __mul__(self, other: "SurdQuantity | RationalLike") -> "SurdQuantity":
        if isinstance(other, SurdQuantity):
            return SurdQuantity(self.coefficient * other.coefficient, self.radicand * other.radicand)
        return SurdQuantity(self.coefficient * q(other), self.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other: "SurdQuantity | RationalLike") -> "SurdQuantity":
        if isinstance(other, SurdQuantity):
            if other.coefficient == 0:
                raise ZeroDivisionError("division by zero surd")
            # a*sqrt(m) / (b*sqrt(n)) = a/(b*n) * sqrt(m*n)
            return SurdQuantity(
                self.coefficient / (other.coefficient * other.radicand),
                self.radicand * other.radicand,
            )
        return SurdQuantity(self.coefficient / q(other), self.radicand)

    def __neg__(self) -> "SurdQuantity":
        return SurdQuantity(-self.coefficient, self.radicand)

    def __lt__(self, other: "SurdQuantity") -> bool:
        return compare_surds(self, other) < 0

    def __le__(self, other: "SurdQuantity") -> bool:
        return compare_surds(self, other) <= 0

    def __gt__(self, other: "SurdQuantity") -> bool:
        return compare_surds(self, other) > 0

    def __ge__(self, other: "SurdQuantity") -> bool:
        return compare_surds(self, other) >= 0

    def __float__(self) -> float:
        return float(self.coefficient) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.radicand == 1:
            return str(self.coefficient)
        return f"{self.coefficient}*sqrt({self.radicand})"

    def to_json(self) -> dict:
        return {"coeff": format_rational(self.coefficient), "radicand": self.radicand}


def compare_surds(a: SurdQuantity, b: SurdQuantity) -> int:
    """Exact ordering of two surds: -1, 0 or 1.

    Decided by signs first, then by comparing squares; no approximation.
    """
    sa, sb = sign(a.coefficient), sign(b.coefficient)
    if sa != sb:
        return (sa > sb) - (sa < sb)
    if sa == 0:
        return 0
    a2, b2 = a.square(), b.square()
    mag = (a2 > b2) - (a2 < b2)
    return mag if sa > 0 else -mag


@dataclass(frozen=True, order=True)
class PiSqQuantity:
    """``coefficient * pi**2``; comparisons reduce to the coefficients."""

    coefficient: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficient", q(self.coefficient))

    def __add__(self, other: "PiSqQuantity") -> "PiSqQuantity":
        return PiSqQuantity(self.coefficient + other.coefficient)

    def __sub__(self, other: "PiSqQuantity") -> "PiSqQuantity":
        return PiSqQuantity(self.coefficient - other.coefficient)

    def __mul__(self, other: RationalLike) -> "PiSqQuantity":
        return PiSqQuantity(self.coefficient * q(other))

    __rmul__ = __mul__

    def __truediv__(self, other: "PiSqQuantity | RationalLike"):
        if isinstance(other, PiSqQuantity):
            # pi^2 cancels
            return self.coefficient / other.coefficient
        return PiSqQuantity(self.coefficient / q(other))

    def __neg__(self) -> "PiSqQuantity":
        return PiSqQuantity(-self.coefficient)

    def __str__(self) -> str:
        return f"{self.coefficient}*pi^2"

    def to_json(self) -> dict:
        return {"pi2_coeff": format_rational(self.coefficient)}


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = q(self.lo), q(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value: RationalLike) -> bool:
        return interval_contains(self, q(value))

    def subset_of(self, other: "RatInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_json(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def interval_contains(i: RatInterval, value: Fraction) -> bool:
    return i.lo <= value <= i.hi


def _arctan_inv_bounds(n: int, terms: int) -> tuple[Fraction, Fraction]:
    """Bracket arctan(1/n) by consecutive partial sums of its alternating series.

    The terms 1/((2k+1) n^(2k+1)) decrease, so partial sums ending on an
    added term overshoot and those ending on a subtracted term undershoot.
    """
    total = Fraction(0)
    partials = []
    n2 = n * n
    power = n
    for k in range(terms + 1):
        term = Fraction(1, (2 * k + 1) * power)
        total = total + term if k % 2 == 0 else total - term
        partials.append(total)
        power *= n2
    a, b = partials[-2], partials[-1]
    return min(a, b), max(a, b)


def pi_enclosure(max_width: RationalLike) -> RatInterval:
    """Rational interval containing pi of width at most ``max_width``.

    Uses Machin's identity pi = 16 arctan(1/5) - 4 arctan(1/239) with
    alternating-series brackets on both arctangents.
    """
    max_width = q(max_width)
    if max_width <= 0:
        raise ValueError("max_width must be positive")
    terms = 1
    while True:
        lo5, hi5 = _arctan_inv_bounds(5, terms)
        lo239, hi239 = _arctan_inv_bounds(239, terms)
        enclosure = RatInterval(16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239)
        if enclosure.width <= max_width:
            return enclosure
        terms += 1

"""Exact univariate polynomial algebra over the rationals.

Polynomials are immutable, ascending-coefficient tuples of Fractions.  Root
counting uses Sturm chains; every remainder in a chain is rescaled by a
positive constant to an integer primitive polynomial, which leaves the sign
pattern (and therefore the count) unchanged while keeping coefficients small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .errors import EndpointRoot, NoRationalWitness, NotSquarefree, PoleAt
from .exactnum import RatInterval, RationalLike, format_rational, q, sign

# Offset denominator used to push a bisection midpoint off an exact root.
_SHIFT_PRIME = 1_000_003


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: RationalLike = 1) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: RationalLike) -> Fraction:
        x = q(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial([1])
        for _ in range(n):
            result = result * self
        return result

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        lead = other.lead
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quo[k - d] = c
            for j, b in enumerate(other.coeffs):
                rem[k - d + j] -= c * b
        return Polynomial(quo), Polynomial(rem[:d] if d > 0 else [])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        s = "".join(f" {sg} {b}" for sg, b in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive(self) -> "Polynomial":
        """Positive multiple with coprime integer coefficients (sign preserved)."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return Polynomial(Fraction(i, g) for i in ints)

    def sign_variations(self) -> int:
        """Sign changes in the coefficient sequence (Descartes' rule of signs)."""
        return count_sign_changes(self.coeffs)

    def strip_x_powers(self) -> tuple["Polynomial", int]:
        """Return (p / x^m, m) with m the order of vanishing at 0."""
        m = 0
        while m < len(self.coeffs) and self.coeffs[m] == 0:
            m += 1
        return Polynomial(self.coeffs[m:]), m


X = Polynomial([0, 1])


def count_sign_changes(values: Iterable[Fraction]) -> int:
    signs = [sign(v) for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def derivative(p: Polynomial) -> Polynomial:
    return Polynomial(i * c for i, c in enumerate(p.coeffs) if i > 0)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero polynomial if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(p: Polynomial) -> bool:
    return poly_gcd(p, derivative(p)).degree <= 0


def cauchy_bound(p: Polynomial) -> Fraction:
    """1 + max |c_i / c_lead|; every real root lies strictly inside (-B, B)."""
    if p.degree < 1:
        return Fraction(1)
    return 1 + max(abs(c / p.lead) for c in p.coeffs[:-1])


@dataclass(frozen=True)
class RationalFunctionQ:
    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(self.num, self.den)
        num, den = self.num, self.den
        if g.degree > 0:
            num, den = num // g, den // g
        scale = 1 / den.lead
        object.__setattr__(self, "num", num * scale)
        object.__setattr__(self, "den", den * scale)

    def __call__(self, x: RationalLike) -> Fraction:
        return ratfunc_eval(self, x)

    def derivative(self) -> "RationalFunctionQ":
        n, d = self.num, self.den
        return RationalFunctionQ(derivative(n) * d - n * derivative(d), d * d)

    def __sub__(self, c: RationalLike) -> "RationalFunctionQ":
        return RationalFunctionQ(self.num - self.den * q(c), self.den)


def ratfunc_eval(r: RationalFunctionQ, x: RationalLike) -> Fraction:
    x = q(x)
    d = r.den(x)
    if d == 0:
        raise PoleAt(f"denominator vanishes at x = {x}")
    return r.num(x) / d


@dataclass(frozen=True)
class SturmChain:
    sequence: tuple[Polynomial, ...]

    def variations(self, x: RationalLike) -> int:
        x = q(x)
        return count_sign_changes(p(x) for p in self.sequence)


def sturm_chain(p: Polynomial) -> SturmChain:
    """p, p', then positive multiples of the negated successive remainders."""
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    seq = [p, derivative(p).primitive()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r.primitive())
    return SturmChain(tuple(s for s in seq if not s.is_zero()))


def _require_squarefree(p: Polynomial) -> None:
    if not is_squarefree(p):
        raise NotSquarefree(f"gcd(p, p') is nonconstant for p = {p}")


def sturm_root_count(p: Polynomial, a: RationalLike, b: RationalLike) -> int:
    """Number of distinct real roots of the squarefree ``p`` in (a, b)."""
    a, b = q(a), q(b)
    if not a < b:
        raise ValueError("need a < b")
    if p(a) == 0 or p(b) == 0:
        raise EndpointRoot(f"{p} vanishes at an endpoint of ({a}, {b})")
    _require_squarefree(p)
    chain = sturm_chain(p)
    return chain.variations(a) - chain.variations(b)


@dataclass(frozen=True)
class RootEnclosure:
    interval: RatInterval
    sturm_count: int = 1

    def __post_init__(self) -> None:
        if self.sturm_count != 1:
            raise ValueError("a root enclosure must certify exactly one root")

    @property
    def lo(self) -> Fraction:
        return self.interval.lo

    @property
    def hi(self) -> Fraction:
        return self.interval.hi

    @property
    def width(self) -> Fraction:
        return self.interval.width

    def to_json(self) -> dict:
        return {"interval": self.interval.to_json(), "sturm_count": self.sturm_count}


def _split_point(p: Polynomial, lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    step = (hi - lo) / _SHIFT_PRIME
    while p(mid) == 0:
        mid += step
    return mid


def isolate_positive_roots(p: Polynomial) -> list[RootEnclosure]:
    """Disjoint Sturm-certified enclosures of every positive root of ``p``."""
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    _require_squarefree(p)
    core, _ = p.strip_x_powers()
    if core.degree < 1:
        return []
    chain = sturm_chain(core)
    bound = cauchy_bound(core)
    found: list[RootEnclosure] = []
    stack = [(Fraction(0), bound, chain.variations(0) - chain.variations(bound))]
    while stack:
        lo, hi, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            found.append(RootEnclosure(RatInterval(lo, hi), 1))
            continue
        mid = _split_point(core, lo, hi)
        v_mid = chain.variations(mid)
        stack.append((mid, hi, v_mid - chain.variations(hi)))
        stack.append((lo, mid, chain.variations(lo) - v_mid))
    return sorted(found, key=lambda e: e.lo)


def refine_enclosure(p: Polynomial, e: RootEnclosure, width: RationalLike) -> RootEnclosure:
    """Bisect ``e`` until its width is at most ``width``.

    The root is simple, so exact signs at the endpoints suffice; an endpoint
    of ``e`` that happens to be the root itself is handled by nudging inward.
    """
    width = q(width)
    if width <= 0:
        raise ValueError("width must be positive")
    lo, hi = e.lo, e.hi
    if lo == hi:
        return e
    s_lo, s_hi = sign(p(lo)), sign(p(hi))
    if s_lo == 0 or s_hi == 0:
        root = lo if s_lo == 0 else hi
        return RootEnclosure(RatInterval(root, root), 1)
    if s_lo == s_hi:
        raise ValueError("enclosure does not bracket a sign change")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = sign(p(mid))
        if s_mid == 0:
            return RootEnclosure(RatInterval(mid, mid), 1)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return RootEnclosure(RatInterval(lo, hi), 1)


@dataclass(frozen=True)
class CoefficientCertificate:
    """All coefficients nonnegative and at least one positive: p > 0 for x > 0."""

    polynomial: Polynomial
    kind: str = field(default="CoefficientCertificate", init=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "polynomial": self.polynomial.to_json()}


@dataclass(frozen=True)
class SturmCertificate:
    """No roots on (0, bound) with bound a Cauchy bound, and p(1) > 0."""

    polynomial: Polynomial
    stripped_power: int
    bound: Fraction
    root_count: int
    value_at_one: Fraction
    kind: str = field(default="SturmCertificate", init=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "polynomial": self.polynomial.to_json(),
            "stripped_power": self.stripped_power,
            "bound": format_rational(self.bound),
            "root_count": self.root_count,
            "value_at_one": format_rational(self.value_at_one),
        }


@dataclass(frozen=True)
class Counterexample:
    polynomial: Polynomial
    x: Fraction
    value: Fraction
    kind: str = field(default="Counterexample", init=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "polynomial": self.polynomial.to_json(),
            "x": format_rational(self.x),
            "value": format_rational(self.value),
        }


PositivityResult = Union[CoefficientCertificate, SturmCertificate, Counterexample]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_root_in(p: Polynomial, lo: Fraction, hi: Fraction) -> Fraction | None:
    prim = p.primitive()
    lead = int(prim.lead)
    for d in _divisors(lead):
        for k in range(math.floor(lo * d), math.ceil(hi * d) + 1):
            cand = Fraction(k, d)
            if lo <= cand <= hi and cand > 0 and p(cand) == 0:
                return cand
    return None


def certify_positive_on_ray(p: Polynomial) -> PositivityResult:
    """Prove p > 0 on (0, inf) or exhibit a rational x > 0 with p(x) <= 0."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if all(c >= 0 for c in p.coeffs):
        return CoefficientCertificate(p)

    core, m = p.strip_x_powers()
    sqf = core // poly_gcd(core, derivative(core)) if core.degree > 0 else core
    bound = cauchy_bound(sqf)
    roots = sturm_root_count(sqf, 0, bound) if sqf.degree > 0 else 0
    if roots == 0 and p(1) > 0:
        return SturmCertificate(p, m, bound, 0, p(1))

    # half-integer grid first, so simple counterexamples stay simple
    k = 1
    while Fraction(k, 2) <= bound + 1:
        x = Fraction(k, 2)
        if p(x) <= 0:
            return Counterexample(p, x, p(x))
        k += 1
    for enc in isolate_positive_roots(sqf):
        lead = int(sqf.primitive().lead)
        fine = refine_enclosure(sqf, enc, Fraction(1, 2 * lead * lead + 1))
        for x in (fine.lo, fine.hi, fine.interval.midpoint):
            if x > 0 and p(x) <= 0:
                return Counterexample(p, x, p(x))
        r = _rational_root_in(sqf, fine.lo, fine.hi)
        if r is not None:
            return Counterexample(p, r, p(r))
    raise NoRationalWitness(f"{p} is nonnegative on the ray but vanishes at an irrational point")

"""Controlled-cone membership, Yamabe and Sobolev bounds for the symmetric family.

Every inequality is reduced to a pi-free rational or surd comparison; pi is
only needed (crudely) to decide which arm of max(6, s_max V^(1/2)) is active.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError, OutsideCone
from .exactnum import (
    PiSqQuantity,
    RatInterval,
    RationalLike,
    SurdQuantity,
    compare_surds,
    format_rational,
    pi_enclosure,
    q,
)
from .extremal import DEN, F, NUM_CORE
from .polyalg import CoefficientCertificate, certify_positive_on_ray
from .surface import c1_squared

C1_SQUARED = c1_squared()
if C1_SQUARED != 7:
    raise ConsistencyError(f"c1^2 = {C1_SQUARED}, expected 7")
CONE_LIMIT = Fraction(3, 2) * C1_SQUARED


@dataclass(frozen=True)
class DominationCertificate:
    """f = 9 N / (3 D) with N <= 3 D coefficientwise, strictly somewhere."""

    pairs: tuple[tuple[Fraction, Fraction], ...]
    gap: CoefficientCertificate

    @property
    def valid(self) -> bool:
        return all(a <= b for a, b in self.pairs) and any(a < b for a, b in self.pairs)

    def to_json(self) -> dict:
        return {
            "pairs": [[format_rational(a), format_rational(b)] for a, b in self.pairs],
            "gap": self.gap.to_json(),
            "constant_term_strict": self.pairs[0][0] < self.pairs[0][1],
        }


def certify_A_below_9() -> DominationCertificate:
    """Term-by-term domination of the numerator gives f(x) < 9 for all x >= 0."""
    scaled = DEN * 3
    pairs = tuple(zip(NUM_CORE.coeffs, scaled.coeffs))
    if len(NUM_CORE.coeffs) != len(scaled.coeffs):
        raise ConsistencyError("numerator and denominator degrees differ")
    gap = certify_positive_on_ray(scaled - NUM_CORE)
    if not isinstance(gap, CoefficientCertificate):
        raise ConsistencyError("3D - N is not coefficientwise nonnegative")
    cert = DominationCertificate(pairs, gap)
    if not cert.valid or not F.num.lead / F.den.lead == 9:
        raise ConsistencyError("domination certificate failed")
    return cert


@dataclass(frozen=True)
class ConeMembership:
    a_value: Fraction
    margin: Fraction
    inside: bool

    def to_json(self) -> dict:
        return {
            "a_value": format_rational(self.a_value),
            "margin": format_rational(self.margin),
            "inside": self.inside,
        }


def cone_membership(a_value: RationalLike) -> ConeMembership:
    a_value = q(a_value)
    margin = CONE_LIMIT - a_value
    return ConeMembership(a_value, margin, margin > 0)


@dataclass(frozen=True)
class YamabeBound:
    y_squared_pi2: PiSqQuantity
    at_least_4pi_sqrt6: bool

    @property
    def y_lower(self) -> SurdQuantity:
        """Y >= y_lower * pi."""
        return SurdQuantity.sqrt_of(self.y_squared_pi2.coefficient)

    def to_json(self) -> dict:
        return {
            "y_squared": self.y_squared_pi2.to_json(),
            "y_lower_over_pi": self.y_lower.to_json(),
            "at_least_4pi_sqrt6": self.at_least_4pi_sqrt6,
        }


def yamabe_lower(a_value: RationalLike) -> YamabeBound:
    """Y^2 >= 64 pi^2 (3/2 c1^2 - A)."""
    a_value = q(a_value)
    if a_value >= CONE_LIMIT:
        raise OutsideCone(f"A = {a_value} is not below {CONE_LIMIT}")
    coeff = 64 * (CONE_LIMIT - a_value)
    return YamabeBound(PiSqQuantity(coeff), coeff >= 96)


@dataclass(frozen=True)
class SobolevBound:
    value: SurdQuantity
    max_arm: str
    smax_over_pi: SurdQuantity
    yamabe_over_pi: SurdQuantity
    pi_interval: RatInterval

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "max_arm": self.max_arm,
            "s_max_sqrtV_over_pi": self.smax_over_pi.to_json(),
            "yamabe_over_pi": self.yamabe_over_pi.to_json(),
            "pi_enclosure": self.pi_interval.to_json(),
        }


def sobolev_upper(pi_width: RationalLike = 1) -> SobolevBound:
    """C_S < max(6, 24 pi sqrt2) / (4 pi sqrt6), which simplifies to 2 sqrt3."""
    smax = SurdQuantity(24, 2)
    yam = yamabe_lower(9).y_lower
    if compare_surds(yam, SurdQuantity(4, 6)) != 0:
        raise ConsistencyError(f"Yamabe bound at A = 9 is {yam} pi, expected 4 sqrt6 pi")
    enclosure = pi_enclosure(pi_width)
    # pi >= lo, so 24 pi sqrt2 >= 24 lo sqrt2; compare that against 6
    if compare_surds(smax * enclosure.lo, SurdQuantity(6)) > 0:
        arm = "s_max"
        value = smax / yam
    else:
        raise ConsistencyError("pi enclosure too coarse to decide max(6, 24 pi sqrt2)")
    return SobolevBound(value, arm, smax, yam, enclosure)

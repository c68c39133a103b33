"""Calabi energy on bilaterally symmetric classes and its certified critical point.

``f(x) = A((1 + x)(F1 + F2) - x E)`` is a degree-6 over degree-6 rational
function.  Its value can be assembled two independent ways: from the
intersection pairing plus the Futaki term (:func:`calabi_A`), or from the
closed form (:data:`F`).  Both must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, ReconstructionMismatch, WidthTooCoarse
from .exactnum import PiSqQuantity, RatInterval, RationalLike, format_rational, q
from .polyalg import (
    X,
    CoefficientCertificate,
    Polynomial,
    RationalFunctionQ,
    RootEnclosure,
    SturmCertificate,
    certify_positive_on_ray,
    cauchy_bound,
    derivative,
    isolate_positive_roots,
    refine_enclosure,
    sturm_root_count,
)
from .surface import C1, CohomologyClass, pair

NUM_CORE = Polynomial([32, 176, 318, 280, 132, 32, 3])
DEN = Polynomial([12, 72, 138, 120, 54, 12, 1])
F = RationalFunctionQ(NUM_CORE * 3, DEN)

# f - 8 = x * BOUNDARY_QUINTIC / DEN
BOUNDARY_QUINTIC = Polynomial([-48, -150, -120, -36, 0, 1])
SCALAR_NUMERATOR = Polynomial([48, 180, 264, 270, 204, 102, 28, 3])
C0_RESIDUAL = Polynomial([2, 12])

if F(0) != 8 or F.num.lead / F.den.lead != 9 or F.num.degree != F.den.degree:
    raise ConsistencyError("closed form of f does not satisfy f(0) = 8 and f -> 9")


def t_variance(beta: RationalLike, eps: RationalLike) -> Fraction:
    """The sextic 12b^6 + 72b^5 e + ... + e^6 (normalized Hamiltonian variance)."""
    beta, eps = q(beta), q(eps)
    return sum(
        (c * beta ** (6 - i) * eps**i for i, c in enumerate(DEN.coeffs)),
        Fraction(0),
    )


def _omega(beta: Fraction, eps: Fraction) -> CohomologyClass:
    # KahlerParams would reject the eps = 0 limit used in boundary checks.
    return CohomologyClass(beta + eps, beta + eps, -eps)


def futaki_numerator(beta: RationalLike, eps: RationalLike) -> Fraction:
    """[w]^2 * Futaki(Xi, [w]) = 4 b e (e^2/3 + b e + b^2)."""
    beta, eps = q(beta), q(eps)
    return 4 * beta * eps * (eps * eps / 3 + beta * eps + beta * beta)


def futaki_generator(beta: RationalLike, eps: RationalLike) -> Fraction:
    beta, eps = q(beta), q(eps)
    w = _omega(beta, eps)
    return futaki_numerator(beta, eps) / pair(w, w)


def lambda_coeff(beta: RationalLike, eps: RationalLike) -> PiSqQuantity:
    """lambda with (s - s0) = lambda (t - t0), in units of pi^2."""
    return PiSqQuantity(-144 * futaki_numerator(beta, eps) / t_variance(beta, eps))


def calabi_A(beta: RationalLike, eps: RationalLike) -> Fraction:
    """(c1.[w])^2/[w]^2 - Futaki(xi, [w]) / (32 pi^2), with xi = lambda * Xi."""
    beta, eps = q(beta), q(eps)
    if beta <= 0 or eps < 0:
        raise ValueError("need beta > 0 and eps >= 0")
    w = _omega(beta, eps)
    topological = pair(C1, w) ** 2 / pair(w, w)
    futaki_xi = lambda_coeff(beta, eps) * futaki_generator(beta, eps)
    return topological - futaki_xi / PiSqQuantity(32)


def f_value(x: RationalLike) -> Fraction:
    return F(x)


def f_derivative() -> RationalFunctionQ:
    return F.derivative()


def f_derivative_numerator() -> Polynomial:
    """3 (N' D - N D'), which has the sign of f' because D^2 > 0."""
    return (derivative(NUM_CORE) * DEN - NUM_CORE * derivative(DEN)) * 3


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    value: Fraction
    expected: str
    holds: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": format_rational(self.value),
            "expected": self.expected,
            "holds": self.holds,
        }


def f_properties() -> list[PropertyCheck]:
    """f(0) = 8, f'(0) = -4, f'(1) > 0 and lim f = 9, all exact."""
    fp = f_derivative()
    limit = F.num.lead / F.den.lead if F.num.degree == F.den.degree else Fraction(0)
    return [
        PropertyCheck("f(0)", F(0), "= 8", F(0) == 8),
        PropertyCheck("f'(0)", fp(0), "= -4", fp(0) == -4),
        PropertyCheck("f'(1)", fp(1), "> 0", fp(1) > 0),
        PropertyCheck("lim f", limit, "= 9", limit == 9),
    ]


@dataclass(frozen=True)
class CriticalCertificate:
    x0: RootEnclosure
    numerator: Polynomial
    search_bound: Fraction
    uniqueness: int
    derivative_at_zero: Fraction
    derivative_at_one: Fraction
    decrease_roots_below: int
    numerator_at_zero: Fraction
    value_samples: tuple[tuple[Fraction, Fraction], ...]
    denominator_positive: CoefficientCertificate

    @property
    def valid(self) -> bool:
        return (
            self.uniqueness == 1
            and self.derivative_at_zero == -4
            and self.derivative_at_one > 0
            and self.decrease_roots_below == 0
            and self.numerator_at_zero < 0
            and all(v < 8 for _, v in self.value_samples)
        )

    @property
    def margin(self) -> Fraction:
        """8 - max f over the recorded samples."""
        return 8 - max(v for _, v in self.value_samples)

    def to_json(self) -> dict:
        return {
            "x0": self.x0.to_json(),
            "derivative_numerator": self.numerator.to_json(),
            "search_bound": format_rational(self.search_bound),
            "positive_root_count": self.uniqueness,
            "f_prime_at_0": format_rational(self.derivative_at_zero),
            "f_prime_at_1": format_rational(self.derivative_at_one),
            "roots_below_x0": self.decrease_roots_below,
            "numerator_at_0": format_rational(self.numerator_at_zero),
            "f_samples": [[format_rational(x), format_rational(v)] for x, v in self.value_samples],
            "denominator_positive": self.denominator_positive.to_json(),
        }


def certify_critical_point(width: RationalLike) -> CriticalCertificate:
    """Isolate the unique positive critical point x0 of f and show f < 8 on (0, x0]."""
    width = q(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if width >= 1:
        raise WidthTooCoarse("width must be < 1 for an informative enclosure")
    den_cert = certify_positive_on_ray(DEN)
    if not isinstance(den_cert, CoefficientCertificate) or DEN(0) <= 0:
        raise ConsistencyError("denominator of f must be positive on [0, inf)")
    num = f_derivative_numerator()
    bound = cauchy_bound(num)
    count = sturm_root_count(num, 0, bound)
    roots = isolate_positive_roots(num)
    if count != 1 or len(roots) != 1:
        raise ConsistencyError(f"expected one positive critical point, found {count}")
    x0 = refine_enclosure(num, roots[0], width)
    below = sturm_root_count(num, 0, x0.lo) if x0.lo > 0 else 0
    fp = f_derivative()
    above = x0.hi + max(x0.width, width)
    samples = tuple((x, F(x)) for x in (x0.lo, x0.hi, above))
    return CriticalCertificate(
        x0=x0,
        numerator=num,
        search_bound=bound,
        uniqueness=count,
        derivative_at_zero=fp(0),
        derivative_at_one=fp(1),
        decrease_roots_below=below,
        numerator_at_zero=num(0),
        value_samples=samples,
        denominator_positive=den_cert,
    )


@dataclass(frozen=True)
class BoundaryRootL:
    L: RootEnclosure
    quintic: Polynomial
    descartes_changes: int
    sturm_count: int
    grid_below: tuple[tuple[Fraction, Fraction], ...]
    above: tuple[tuple[Fraction, Fraction], ...]

    @property
    def valid(self) -> bool:
        return (
            self.quintic == BOUNDARY_QUINTIC
            and self.descartes_changes == 1
            and self.sturm_count == 1
            and all(v < 8 for _, v in self.grid_below)
            and all(v > 8 for _, v in self.above)
            and 7 < self.L.lo
            and self.L.hi < 8
        )

    def to_json(self) -> dict:
        return {
            "L": self.L.to_json(),
            "quintic": self.quintic.to_json(),
            "descartes_sign_changes": self.descartes_changes,
            "sturm_count": self.sturm_count,
            "grid_below_max": format_rational(max(v for _, v in self.grid_below)),
            "grid_points": len(self.grid_below),
            "f_above": [[format_rational(x), format_rational(v)] for x, v in self.above],
        }


def boundary_quintic() -> Polynomial:
    """Numerator of f - 8 divided by x; raises if it is not the expected quintic."""
    numer = F.num - F.den * 8
    core, power = numer.strip_x_powers()
    if power != 1 or core != BOUNDARY_QUINTIC:
        raise ReconstructionMismatch(f"f - 8 has numerator {numer}")
    return core


def certify_boundary_L(width: RationalLike, grid_points: int = 64) -> BoundaryRootL:
    """Enclose L, the first positive solution of f(x) = 8."""
    width = q(width)
    if width <= 0:
        raise ValueError("width must be positive")
    quintic = boundary_quintic()
    bound = cauchy_bound(quintic)
    count = sturm_root_count(quintic, 0, bound)
    roots = isolate_positive_roots(quintic)
    if count != 1 or len(roots) != 1:
        raise ConsistencyError(f"expected one positive root of f - 8, found {count}")
    L = refine_enclosure(quintic, roots[0], width)
    if not (quintic(7) < 0 < quintic(8)):
        raise ConsistencyError("quintic must change sign on (7, 8)")
    if not (7 <= L.lo and L.hi <= 8):
        L = refine_enclosure(quintic, RootEnclosure(RatInterval(7, 8)), width)
    grid = tuple(
        (x, F(x)) for x in (L.lo * Fraction(i, grid_points + 1) for i in range(1, grid_points + 1))
    )
    grid = grid + ((L.lo, F(L.lo)),)
    above = ((L.hi, F(L.hi)), (L.hi + 1, F(L.hi + 1)))
    return BoundaryRootL(
        L=L,
        quintic=quintic,
        descartes_changes=quintic.sign_variations(),
        sturm_count=count,
        grid_below=grid,
        above=above,
    )


@dataclass(frozen=True)
class ScalarPositivityCertificate:
    polynomial: Polynomial
    positivity: CoefficientCertificate | SturmCertificate

    def to_json(self) -> dict:
        return {"numerator": self.polynomial.to_json(), "positivity": self.positivity.to_json()}


def scalar_lower_numerator() -> Polynomial:
    """(4 + 3x) D - 9 (2 + x) 4x (x^2/3 + x + 1)(2 + 4x + x^2)."""
    vol2 = Polynomial([2, 4, 1])
    futaki = Polynomial([1, 1, Fraction(1, 3)])
    return Polynomial([4, 3]) * DEN - Polynomial([2, 1]) * X * futaki * vol2 * 36


def certify_scalar_positive() -> ScalarPositivityCertificate:
    """Lower bound for s_min is 8 pi / beta times a ratio whose numerator is positive."""
    assembled = scalar_lower_numerator()
    if assembled != SCALAR_NUMERATOR:
        raise ReconstructionMismatch(f"assembled {assembled}, expected {SCALAR_NUMERATOR}")
    cert = certify_positive_on_ray(assembled)
    if not isinstance(cert, (CoefficientCertificate, SturmCertificate)):
        raise ConsistencyError("scalar-curvature numerator is not positive on the ray")
    return ScalarPositivityCertificate(assembled, cert)


@dataclass(frozen=True)
class C0BoundCertificate:
    residual: Polynomial
    positivity: CoefficientCertificate | SturmCertificate
    statement: str = field(
        default=(
            "8 pi (4b+3e) sqrt2 / sqrt(2b^2+4be+e^2) < 24 pi sqrt2 "
            "<=> (4+3x)^2 < 9(2+4x+x^2) <=> 0 < 2+12x"
        )
    )

    def to_json(self) -> dict:
        return {
            "residual": self.residual.to_json(),
            "positivity": self.positivity.to_json(),
            "statement": self.statement,
        }


def certify_c0_bound() -> C0BoundCertificate:
    """s_max V^(1/2) < 24 pi sqrt(2), reduced to positivity of 9(2+4x+x^2) - (4+3x)^2."""
    residual = Polynomial([2, 4, 1]) * 9 - Polynomial([4, 3]) ** 2
    if residual != C0_RESIDUAL:
        raise ReconstructionMismatch(f"C0 residual is {residual}")
    cert = certify_positive_on_ray(residual)
    if not isinstance(cert, (CoefficientCertificate, SturmCertificate)):
        raise ConsistencyError("C0 residual is not positive on the ray")
    return C0BoundCertificate(residual, cert)

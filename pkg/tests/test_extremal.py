import random
from fractions import Fraction

import numpy as np
import pytest

from extremal_cert.errors import WidthTooCoarse
from extremal_cert.exactnum import PiSqQuantity
from extremal_cert.extremal import (
    F,
    calabi_A,
    certify_boundary_L,
    certify_c0_bound,
    certify_critical_point,
    certify_scalar_positive,
    f_derivative,
    f_derivative_numerator,
    f_properties,
    futaki_generator,
    futaki_numerator,
    lambda_coeff,
    t_variance,
)
from extremal_cert.polyalg import is_squarefree
from extremal_cert.surface import C1, KahlerParams, omega_class, pair, swap_involution

# closed form typed in independently of the package constants
NUM = [32, 176, 318, 280, 132, 32, 3]
DEN = [12, 72, 138, 120, 54, 12, 1]


def closed_form(x):
    return 3 * sum(c * x**i for i, c in enumerate(NUM)) / sum(c * x**i for i, c in enumerate(DEN))


def random_pairs(n=200, seed=31415):
    rng = random.Random(seed)
    return [
        (Fraction(rng.randint(1, 999), rng.randint(1, 99)), Fraction(rng.randint(1, 999), rng.randint(1, 99)))
        for _ in range(n)
    ]


@pytest.mark.parametrize("beta, eps, value", [(1, 0, 12), (1, 1, 409), (2, 0, 768)])
def test_t_variance(beta, eps, value):
    assert t_variance(beta, eps) == value


def test_futaki_scaling():
    assert futaki_numerator(1, 1) == Fraction(28, 3)
    assert futaki_generator(1, 1) == Fraction(4, 3)
    assert futaki_generator(2, 2) == Fraction(16, 3)
    assert futaki_generator(1, 0) == 0


def test_lambda_coefficient():
    assert lambda_coeff(1, 1) == PiSqQuantity(Fraction(-1344, 409))


def test_calabi_A_matches_closed_form():
    for beta, eps in random_pairs():
        assert calabi_A(beta, eps) == closed_form(eps / beta)


def test_calabi_A_scale_and_swap_invariance():
    for beta, eps in random_pairs(50, seed=2):
        t = Fraction(beta.numerator + 2, eps.denominator + 1)
        assert calabi_A(t * beta, t * eps) == calabi_A(beta, eps)
        w = omega_class(KahlerParams(beta, eps))
        assert swap_involution(w) == w
        assert pair(C1, swap_involution(w)) ** 2 / pair(w, w) == pair(C1, w) ** 2 / pair(w, w)


def test_f_at_least_seven_and_below_nine():
    for x in [Fraction(i, 7) for i in range(0, 200)]:
        assert 7 <= F(x) < 9


def test_f_decreasing_then_increasing():
    xs = [Fraction(i, 100) for i in range(0, 96)]
    vals = [F(x) for x in xs]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    xs = [Fraction(96, 100) + Fraction(i, 10) for i in range(0, 100)]
    vals = [F(x) for x in xs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_f_properties_all_hold():
    checks = {c.name: c for c in f_properties()}
    assert all(c.holds for c in checks.values())
    assert checks["f(0)"].value == 8
    assert checks["f'(0)"].value == -4
    assert checks["lim f"].value == 9


def test_derivative_numerator_is_squarefree_with_one_positive_root():
    num = f_derivative_numerator()
    assert num.degree == 10
    assert is_squarefree(num)
    roots = np.roots([float(c) for c in reversed(num.coeffs)])
    pos = [r.real for r in roots if abs(r.imag) < 1e-8 and r.real > 0]
    assert len(pos) == 1 and abs(pos[0] - 0.957712805) < 1e-6
    assert f_derivative()(1) > 0


def test_critical_point_certificate():
    cert = certify_critical_point(Fraction(1, 10**6))
    assert cert.valid and cert.uniqueness == 1
    assert cert.x0.width <= Fraction(1, 10**6)
    assert cert.x0.hi > Fraction(957, 1000) and cert.x0.lo < Fraction(959, 1000)
    assert F(cert.x0.lo) < 8 and F(cert.x0.hi) < 8
    assert cert.margin > 0


def test_critical_point_lies_before_boundary():
    crit = certify_critical_point(Fraction(1, 10**3))
    bound = certify_boundary_L(Fraction(1, 10**3))
    assert 0 < crit.x0.lo and crit.x0.hi < bound.L.lo


def test_width_too_coarse():
    with pytest.raises(WidthTooCoarse):
        certify_critical_point(1)


def test_boundary_L():
    cert = certify_boundary_L(Fraction(1, 10**3))
    assert cert.valid
    assert 7 < cert.L.lo and cert.L.hi < 8 and cert.L.width <= Fraction(1, 10**3)
    assert cert.L.lo < Fraction(741764515, 10**8) < cert.L.hi
    # f - 8 = x * quintic / D
    for x in (Fraction(1, 3), Fraction(5), Fraction(22, 7)):
        assert F(x) - 8 == x * cert.quintic(x) / sum(c * x**i for i, c in enumerate(DEN))


def test_scalar_and_c0_reconstructions():
    assert certify_scalar_positive().polynomial.coeffs == tuple(
        Fraction(c) for c in (48, 180, 264, 270, 204, 102, 28, 3)
    )
    assert certify_c0_bound().residual.coeffs == (2, 12)

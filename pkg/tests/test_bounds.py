from fractions import Fraction

import pytest

from extremal_cert.bounds import (
    CONE_LIMIT,
    certify_A_below_9,
    cone_membership,
    sobolev_upper,
    yamabe_lower,
)
from extremal_cert.errors import OutsideCone
from extremal_cert.exactnum import PiSqQuantity, SurdQuantity


def test_domination_pairs():
    cert = certify_A_below_9()
    assert cert.valid
    assert [(int(a), int(b)) for a, b in cert.pairs] == [
        (32, 36), (176, 216), (318, 414), (280, 360), (132, 162), (32, 36), (3, 3)
    ]


def test_cone_limit_and_membership():
    assert CONE_LIMIT == Fraction(21, 2)
    assert cone_membership(9).margin == Fraction(3, 2)
    assert cone_membership(Fraction(2919, 409)).inside
    assert not cone_membership(Fraction(21, 2)).inside


def test_yamabe_bound_at_supremum():
    y = yamabe_lower(9)
    assert y.y_squared_pi2 == PiSqQuantity(96)
    assert y.y_lower == SurdQuantity(4, 6)
    assert y.at_least_4pi_sqrt6


def test_yamabe_outside_cone():
    with pytest.raises(OutsideCone):
        yamabe_lower(Fraction(21, 2))


@pytest.mark.parametrize("width", [1, Fraction(1, 100)])
def test_sobolev_constant(width):
    s = sobolev_upper(width)
    assert s.value == SurdQuantity(2, 3)
    assert s.max_arm == "s_max"
    assert float(s.value) == pytest.approx(2 * 3**0.5)

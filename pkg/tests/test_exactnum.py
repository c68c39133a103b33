import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal_cert.errors import ConfigError
from extremal_cert.exactnum import (
    PiSqQuantity,
    RatInterval,
    SurdQuantity,
    compare_surds,
    format_rational,
    interval_contains,
    parse_rational,
    pi_enclosure,
    squarefree_decompose,
)

# first 50 decimals of pi, truncated (independent of the Machin series)
PI_50 = Fraction(314159265358979323846264338327950288419716939937510, 10**50)

rationals = st.fractions(max_denominator=10**6).filter(lambda v: abs(v) < 10**6)


@given(rationals, rationals, rationals)
def test_field_laws_and_normalization(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    for v in (a + b, a * b, a - c):
        assert v.denominator > 0
        assert math.gcd(abs(v.numerator), v.denominator) == 1


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (SurdQuantity(2, 3), SurdQuantity(3, 1), 1),
        (SurdQuantity(1, 2), SurdQuantity(1, 2), 0),
        (SurdQuantity(-1, 2), SurdQuantity(1, 3), -1),
        (SurdQuantity(-2, 3), SurdQuantity(-3, 1), -1),
        (SurdQuantity(0, 5), SurdQuantity(0, 7), 0),
    ],
)
def test_compare_surds_examples(a, b, expected):
    assert compare_surds(a, b) == expected


def test_surd_normalization_extracts_squares():
    s = SurdQuantity(1, 12)
    assert (s.coefficient, s.radicand) == (2, 3)
    assert SurdQuantity(3, 8) == SurdQuantity(6, 2)
    assert SurdQuantity(0, 8).radicand == 1
    assert squarefree_decompose(72) == (6, 2)


def test_surd_arithmetic():
    assert SurdQuantity(24, 2) / SurdQuantity(4, 6) == SurdQuantity(2, 3)
    assert SurdQuantity(2, 3).square() == 12
    assert SurdQuantity(6, 2).square() / 6 == 12
    assert SurdQuantity.sqrt_of(96) == SurdQuantity(4, 6)
    assert SurdQuantity.sqrt_of(Fraction(1, 2)) == SurdQuantity(Fraction(1, 2), 2)


def test_compare_surds_matches_floats_on_random_pairs():
    rng = random.Random(20070427)
    checked = 0
    while checked < 1000:
        a = SurdQuantity(Fraction(rng.randint(-50, 50), rng.randint(1, 20)), rng.randint(1, 60))
        b = SurdQuantity(Fraction(rng.randint(-50, 50), rng.randint(1, 20)), rng.randint(1, 60))
        fa, fb = float(a), float(b)
        if abs(fa - fb) <= 1e-6:
            continue
        assert compare_surds(a, b) == (1 if fa > fb else -1)
        checked += 1


def test_pisq_cancels():
    assert PiSqQuantity(8) < PiSqQuantity(Fraction(68, 3))
    assert PiSqQuantity(24) / PiSqQuantity(12) == 2
    assert (PiSqQuantity(3) * 2).coefficient == 6


@pytest.mark.parametrize("width", [Fraction(1), Fraction(1, 10), Fraction(1, 10**6), Fraction(1, 10**30)])
def test_pi_enclosure_contains_pi(width):
    enc = pi_enclosure(width)
    assert enc.width <= width
    assert enc.lo <= PI_50 + Fraction(1, 10**50)
    assert enc.hi >= PI_50


def test_pi_enclosure_against_archimedes():
    enc = pi_enclosure(Fraction(1, 10))
    assert RatInterval(Fraction(223, 71), Fraction(22, 7)).intersects(enc)
    assert enc.lo > 3 and enc.hi < 4


def test_pi_enclosures_nested_or_overlapping():
    widths = [Fraction(1, 10**k) for k in range(0, 20, 3)]
    encs = [pi_enclosure(w) for w in widths]
    for wide, narrow in zip(encs, encs[1:]):
        assert narrow.subset_of(wide) or (
            wide.intersects(narrow) and PI_50 in wide and PI_50 in narrow
        )


def test_pi_enclosure_rejects_nonpositive_width():
    with pytest.raises(ValueError):
        pi_enclosure(0)


@pytest.mark.parametrize(
    "interval, value, expected",
    [
        (RatInterval(0, 1), Fraction(1, 2), True),
        (RatInterval(0, 1), Fraction(2), False),
        (RatInterval(Fraction(3, 2), Fraction(3, 2)), Fraction(3, 2), True),
    ],
)
def test_interval_contains(interval, value, expected):
    assert interval_contains(interval, value) is expected


def test_rational_serialization_round_trip():
    for v in (Fraction(2919, 409), Fraction(-4), Fraction(0)):
        assert parse_rational(format_rational(v)) == v
    assert format_rational(Fraction(8)) == "8/1"
    with pytest.raises(ConfigError):
        parse_rational("0.958")
    with pytest.raises(ConfigError):
        parse_rational("1/0")

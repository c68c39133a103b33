from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal_cert.surface import (
    C1,
    E,
    F1,
    F2,
    GRAM,
    CohomologyClass,
    KahlerParams,
    c1_squared,
    lattice_signature,
    omega_class,
    pair,
    signature,
    swap_involution,
    unit_x_class,
    volume,
)

small = st.fractions(min_value=-50, max_value=50, max_denominator=50)
positive = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=50)
classes = st.builds(CohomologyClass, small, small, small)


@pytest.mark.parametrize(
    "a, b, expected",
    [(F1, F2, 1), (F1, F1, 0), (E, E, -1), (C1, F1, 2), (C1, E, 1), (C1, C1, 7)],
)
def test_pair_examples(a, b, expected):
    assert pair(a, b) == expected


@given(classes, classes, classes, small)
def test_pair_bilinear_and_symmetric(a, b, c, t):
    assert pair(a, b) == pair(b, a)
    assert pair(a + b, c) == pair(a, c) + pair(b, c)
    assert pair(a * t, b) == t * pair(a, b)


def test_c1_and_exceptional_classes():
    assert c1_squared() == 7
    for f in (F1, F2):
        assert pair(f - E, f - E) == -1
        assert pair(C1, f - E) == 1  # adjunction for a (-1)-sphere
    assert C1.is_integral()


@pytest.mark.parametrize(
    "beta, eps, vol",
    [(1, 1, Fraction(7, 2)), (1, Fraction(1, 2), Fraction(17, 8)), (2, 1, Fraction(17, 2))],
)
def test_volume_examples(beta, eps, vol):
    assert volume(KahlerParams(beta, eps)) == vol


@given(positive, positive, positive)
def test_volume_homogeneous_of_degree_two(beta, eps, t):
    assert volume(KahlerParams(t * beta, t * eps)) == t * t * volume(KahlerParams(beta, eps))


@given(positive, positive)
def test_unit_class_matches_omega(beta, eps):
    p = KahlerParams(beta, eps)
    assert omega_class(p) == unit_x_class(p.x) * beta


@given(classes, classes)
def test_swap_is_isometry(a, b):
    assert pair(swap_involution(a), swap_involution(b)) == pair(a, b)
    assert swap_involution(swap_involution(a)) == a
    assert swap_involution(C1) == C1


def test_kahler_params_reject_nonpositive():
    with pytest.raises(ValueError):
        KahlerParams(0, 1)
    with pytest.raises(ValueError):
        KahlerParams(1, -1)


def test_lattice_signature():
    assert lattice_signature() == (1, 2)


@given(st.lists(st.integers(-6, 6), min_size=10, max_size=10), st.integers(1, 4))
def test_signature_matches_eigenvalues(entries, n):
    m = [[0] * n for _ in range(n)]
    it = iter(entries)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    eig = np.linalg.eigvalsh(np.array(m, dtype=float))
    if np.any(np.abs(eig) < 1e-9) and np.linalg.matrix_rank(np.array(m)) == n:
        return  # numerically ambiguous, skip
    expected = (int(np.sum(eig > 1e-9)), int(np.sum(eig < -1e-9)))
    assert signature(m) == expected


def test_signature_zero_diagonal_repair():
    assert signature([[0, 1], [1, 0]]) == (1, 1)
    assert signature(GRAM) == (1, 2)
    assert signature([[0, 0], [0, 0]]) == (0, 0)

"""Intersection arithmetic of CP2 # 2(-CP2) in the basis F1, F2, E.

F1 and F2 are the two ruling classes of CP1 x CP1 pulled back to the blow-up
and E is the exceptional class, so F1.F2 = 1, E.E = -1 and all other basic
pairings vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError
from .exactnum import RationalLike, format_rational, q

GRAM: tuple[tuple[int, ...], ...] = (
    (0, 1, 0),
    (1, 0, 0),
    (0, 0, -1),
)


@dataclass(frozen=True)
class CohomologyClass:
    f1: Fraction
    f2: Fraction
    e: Fraction

    def __post_init__(self) -> None:
        for name in ("f1", "f2", "e"):
            object.__setattr__(self, name, q(getattr(self, name)))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.f1, self.f2, self.e)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.f1 + other.f1, self.f2 + other.f2, self.e + other.e)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.f1 - other.f1, self.f2 - other.f2, self.e - other.e)

    def __mul__(self, scalar: RationalLike) -> "CohomologyClass":
        s = q(scalar)
        return CohomologyClass(self.f1 * s, self.f2 * s, self.e * s)

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.as_tuple())

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.as_tuple()]


F1 = CohomologyClass(1, 0, 0)
F2 = CohomologyClass(0, 1, 0)
E = CohomologyClass(0, 0, 1)
C1 = CohomologyClass(2, 2, -1)


def pair(a: CohomologyClass, b: CohomologyClass) -> Fraction:
    """a^T . GRAM . b."""
    av, bv = a.as_tuple(), b.as_tuple()
    return sum(
        (av[i] * GRAM[i][j] * bv[j] for i in range(3) for j in range(3) if GRAM[i][j]),
        Fraction(0),
    )


def c1_squared() -> Fraction:
    return pair(C1, C1)


if c1_squared() != 7:
    raise ConsistencyError("c1^2 must equal 7 on this surface")


@dataclass(frozen=True)
class KahlerParams:
    """Bilaterally symmetric class (beta + eps)(F1 + F2) - eps E."""

    beta: Fraction
    eps: Fraction

    def __post_init__(self) -> None:
        beta, eps = q(self.beta), q(self.eps)
        if beta <= 0 or eps <= 0:
            raise ValueError("beta and eps must both be positive")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "eps", eps)

    @property
    def x(self) -> Fraction:
        return self.eps / self.beta


def omega_class(p: KahlerParams) -> CohomologyClass:
    s = p.beta + p.eps
    return CohomologyClass(s, s, -p.eps)


def volume(p: KahlerParams) -> Fraction:
    w = omega_class(p)
    return pair(w, w) / 2


def unit_x_class(x: RationalLike) -> CohomologyClass:
    """(1 + x)(F1 + F2) - x E, the class at beta = 1."""
    x = q(x)
    return CohomologyClass(1 + x, 1 + x, -x)


def swap_involution(a: CohomologyClass) -> CohomologyClass:
    return CohomologyClass(a.f2, a.f1, a.e)


def signature(matrix: Sequence[Sequence[RationalLike]]) -> tuple[int, int]:
    """(positive, negative) inertia of a symmetric rational matrix.

    Symmetric Gaussian elimination by congruence; a zero pivot is repaired by
    a swap with a nonzero diagonal entry or by adding a row/column with a
    nonzero off-diagonal entry, which produces pivot 2*a_kj.
    """
    a = [[q(v) for v in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix must be symmetric")
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        pivot = a[k][k]
        if pivot == 0:
            continue
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for r in range(k + 1, n):
            factor = a[r][k] / pivot
            if factor == 0:
                continue
            for c in range(k, n):
                a[r][c] -= factor * a[k][c]
        for c in range(k + 1, n):
            a[k][c] = Fraction(0)
        for r in range(k + 1, n):
            a[r][k] = Fraction(0)
    return pos, neg


def lattice_signature() -> tuple[int, int]:
    return signature(GRAM)

"""Exclusion of curvature bubbles for symmetric classes with Calabi energy below a bound.

All energies are in units of pi^2.  A budget is a strict upper bound: an
energy E with budget B satisfies E < B.  Each step of the argument produces an
:class:`ExclusionCertificate` holding the exact data it used, a rational
margin where one exists, and enough information for :func:`replay` to
re-derive the verdict from the serialized data alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .errors import (
    BudgetTooLarge,
    CertificationError,
    IncompleteExclusion,
    InsufficientBudgetGap,
    InvalidBound,
    NonUnimodular,
    SignLemmaFailure,
)
from .exactnum import PiSqQuantity, RationalLike, format_rational, parse_rational, q
from .polyalg import CoefficientCertificate, Polynomial, RootEnclosure, SturmCertificate, certify_positive_on_ray
from .surface import GRAM, CohomologyClass, c1_squared, pair, signature, unit_x_class

CERTIFIED = "Certified"
FAILED = "Failed"
SKIPPED = "Skipped"

RULES = (
    "TrivialGammaEnergy",
    "BottomAxiom",
    "SpriteRicci",
    "ElfWminus",
    "CaseI_Mod3",
    "CaseII_III_PellArea",
    "ForcedSymmetry",
)
# Non-exclusion bookkeeping steps emitted by the full run.
STEP_RULES = ("EnergyBudget", "SignatureBound", "NoBubbling")

SIGNATURE_TAU = -1  # signature of CP2 # 2(-CP2)

ANCHORS = {
    "EnergyBudget": "Kahler and signature identities: ricci < 8(A-7) pi^2, W- < (12 + 4A/3) pi^2",
    "TrivialGammaEnergy": "deepest bubble cannot be strictly asymptotically Euclidean",
    "BottomAxiom": "a deepest bubble has b2 != 0 (topological input, taken as axiom)",
    "SignatureBound": "b2(X) <= b-(M) = 2",
    "ForcedSymmetry": "F1 <-> F2 induces a holomorphic isometric involution of the bubble",
    "SpriteRicci": "b2 = 1 bubble is the degree -2 or -3 line bundle",
    "ElfWminus": "b2 = 2 bubble has Gamma = Z3 and form [[-2,1],[1,-2]]",
    "CaseI_Mod3": "case (i): -3 = 2m^2 - n^2 has no integer solutions",
    "CaseII_III_PellArea": "cases (ii), (iii): Pell classes contradict the area bound 2/(K+1)",
    "NoBubbling": "all possible deepest bubbles excluded; no bubbling can occur",
}


@dataclass(frozen=True)
class EnergyBudget:
    ricci_pi2: Fraction
    wminus_pi2: Fraction
    a_bound: Fraction

    def to_json(self) -> dict:
        return {
            "a_bound": format_rational(self.a_bound),
            "ricci": PiSqQuantity(self.ricci_pi2).to_json(),
            "wminus": PiSqQuantity(self.wminus_pi2).to_json(),
        }


def energy_budgets(a_bound: RationalLike) -> EnergyBudget:
    """Budgets for the traceless Ricci and anti-self-dual Weyl energies.

    int s^2 = 32 pi^2 A;  int |r0|^2 = int s^2/4 - 8 pi^2 c1^2;
    int |W-|^2 = -12 pi^2 tau + int s^2/24.
    """
    a_bound = q(a_bound)
    c1sq = c1_squared()
    if a_bound <= c1sq:
        raise InvalidBound(f"a_bound must exceed c1^2 = {c1sq}, got {a_bound}")
    s_squared = PiSqQuantity(32 * a_bound)
    ricci = s_squared / 4 - PiSqQuantity(8 * c1sq)
    wminus = PiSqQuantity(-12 * SIGNATURE_TAU) + s_squared / 24
    return EnergyBudget(ricci.coefficient, wminus.coefficient, a_bound)


def gauss_bonnet_deficit(b2: int, gamma_order: int) -> Fraction:
    """8 (chi(X) - 1/|Gamma|) with chi(X) = 1 + b2, in pi^2 units."""
    if b2 < 0 or gamma_order < 1:
        raise ValueError("need b2 >= 0 and |Gamma| >= 1")
    return 8 * (1 + b2 - Fraction(1, gamma_order))


@dataclass(frozen=True)
class BubbleCandidate:
    b2: int
    form: tuple[tuple[int, ...], ...]
    gamma_order: int
    gamma_label: str
    lens: Optional[tuple[int, int]] = None
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.form) != self.b2 or any(len(r) != self.b2 for r in self.form):
            raise ValueError("form must be b2 x b2")
        if not negdef_check(self.form):
            raise ValueError(f"form {self.form} is not negative definite")

    @property
    def chi(self) -> int:
        return 1 + self.b2

    def generator_self_intersection(self) -> int:
        """Square of the swap-invariant class: the sphere itself, or sphere + mirror."""
        return sum(sum(row) for row in self.form)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "b2": self.b2,
            "form": [list(r) for r in self.form],
            "gamma_order": self.gamma_order,
            "gamma": self.gamma_label,
            "lens": list(self.lens) if self.lens else None,
        }


@dataclass
class ExclusionCertificate:
    rule: str
    candidate: str
    data: dict[str, Any]
    margin: Optional[Fraction] = None
    status: str = CERTIFIED
    paper_anchor: str = ""

    def __post_init__(self) -> None:
        if not self.paper_anchor:
            self.paper_anchor = ANCHORS.get(self.rule, "")

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "status": self.status,
            "candidate": self.candidate,
            "paper_anchor": self.paper_anchor,
            "data": self.data,
            "margin": None if self.margin is None else format_rational(self.margin),
        }


def negdef_check(form: Sequence[Sequence[int]]) -> bool:
    """Negative definite iff the leading principal minors alternate in sign, starting negative."""
    n = len(form)
    if n > 2:
        pos, neg = signature(form)
        return neg == n
    if n == 0:
        return True
    if n == 1:
        return form[0][0] < 0
    if form[0][1] != form[1][0]:
        raise ValueError("form must be symmetric")
    det = form[0][0] * form[1][1] - form[0][1] * form[1][0]
    return form[0][0] < 0 and det > 0


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def _mat_inv(a):
    det = Fraction(a[0][0] * a[1][1] - a[0][1] * a[1][0])
    return [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]


@dataclass(frozen=True)
class LensData:
    gamma_order: int
    lens_pair: tuple[int, int]
    gluing: tuple[tuple[int, int], tuple[int, int]]
    determinant: int

    def to_json(self) -> dict:
        return {
            "gamma_order": self.gamma_order,
            "lens": list(self.lens_pair),
            "gluing": [list(r) for r in self.gluing],
            "det": self.determinant,
        }


def lens_data(k: int, l: int) -> LensData:
    """Plumbing of the (-k) and (-l) bundles: solid-torus gluing and the lens space at infinity."""
    if k < 2 or l < 1:
        raise ValueError("need k >= 2 and l >= 1")
    a = [[-k, 1], [1, 0]]
    swap = [[0, 1], [1, 0]]
    b = [[-l, 1], [1, 0]]
    prod = _mat_mul(_mat_mul(_mat_inv(a), swap), b)
    if any(v.denominator != 1 for row in prod for v in row):
        raise NonUnimodular(f"non-integral gluing matrix {prod}")
    glue = tuple(tuple(int(v) for v in row) for row in prod)
    expected = ((-l, 1), (1 - k * l, k))
    det = glue[0][0] * glue[1][1] - glue[0][1] * glue[1][0]
    if glue != expected or abs(det) != 1:
        raise NonUnimodular(f"gluing {glue} (det {det}) differs from {expected}")
    return LensData(k * l - 1, (k * l - 1, l), glue, det)


def _budget_cert(budget: EnergyBudget) -> ExclusionCertificate:
    return ExclusionCertificate(
        rule="EnergyBudget",
        candidate="all",
        data={
            **budget.to_json(),
            "c1_squared": format_rational(c1_squared()),
            "tau": SIGNATURE_TAU,
            "integral_s2": PiSqQuantity(32 * budget.a_bound).to_json(),
            "strict": True,
        },
        margin=None,
    )


def _trivial_gamma_b2_max(ricci: Fraction) -> int:
    """Largest b2 >= 0 with 8 b2 < ricci (the required Ricci energy when Gamma = 1)."""
    b = 0
    while 8 * (b + 1) < ricci:
        b += 1
    return b


def exclude_trivial_gamma(budget: EnergyBudget) -> ExclusionCertificate:
    """Gamma = 1 forces int |W-|^2 = 12 pi^2 b2 and int |r0|^2 = 8 pi^2 b2, hence b2 = 0: flat."""
    b2_max = _trivial_gamma_b2_max(budget.ricci_pi2)
    cert = ExclusionCertificate(
        rule="TrivialGammaEnergy",
        candidate="Gamma = 1",
        data={
            "ricci_budget": format_rational(budget.ricci_pi2),
            "wminus_required_per_b2": "12/1",
            "ricci_required_per_b2": "8/1",
            "forced_b2_max": b2_max,
            "conclusion": "b2 = 0 and r0 = W- = 0, so the bubble is flat" if b2_max == 0 else "",
        },
        margin=8 - budget.ricci_pi2,
    )
    if budget.ricci_pi2 > 8 or b2_max != 0:
        cert.status = FAILED
        raise BudgetTooLarge(
            f"ricci budget {budget.ricci_pi2} pi^2 exceeds 8 pi^2; Gamma = 1 with b2 = {b2_max} survives",
            certificate=cert,
        )
    return cert


def bottom_axiom() -> ExclusionCertificate:
    return ExclusionCertificate(
        rule="BottomAxiom",
        candidate="b2 = 0",
        data={"axiom": "b2(X) != 0", "consequence": "b1 = b3 = 0 and b2 >= 1, so chi(X) = 1 + b2 >= 2"},
        margin=None,
    )


def signature_bound() -> tuple[ExclusionCertificate, int]:
    """A bubble region embeds in M with negative form, so b2(X) <= b-(M)."""
    pos, neg = signature(GRAM)
    cert = ExclusionCertificate(
        rule="SignatureBound",
        candidate="b2 >= 3",
        data={"gram": [list(r) for r in GRAM], "b_plus": pos, "b_minus": neg, "b2_max": neg},
        margin=None,
    )
    return cert, neg


MIN_SINGLE_COPY = (1, 2)


def forced_symmetry(budget: EnergyBudget) -> ExclusionCertificate:
    """Two disjoint bubbles would each cost at least 8(2 - 1/2) = 12 pi^2 of W- energy."""
    single = gauss_bonnet_deficit(*MIN_SINGLE_COPY)
    margin = 2 * single - budget.wminus_pi2
    cert = ExclusionCertificate(
        rule="ForcedSymmetry",
        candidate="swap-asymmetric bubble pair",
        data={
            "min_single_copy": format_rational(single),
            "min_single_copy_at": list(MIN_SINGLE_COPY),
            "two_copies": format_rational(2 * single),
            "wminus_budget": format_rational(budget.wminus_pi2),
        },
        margin=margin,
    )
    if margin <= 0:
        cert.status = FAILED
        raise InsufficientBudgetGap(
            f"two copies need {2 * single} pi^2 but the budget is {budget.wminus_pi2} pi^2",
            certificate=cert,
        )
    return cert


def sprite_required(k: int) -> Fraction:
    """Ricci energy of a scalar-flat Kahler ALE metric on the degree -k bundle: 8 (k-2)^2 / k."""
    return Fraction(8 * (k - 2) ** 2, k)


def _sprite_candidates(ricci: Fraction) -> list[int]:
    # 8(k-2)^2 < ricci k  <=>  8k^2 - (32 + ricci) k + 32 < 0, so k < (32 + ricci)/8
    k_max = math.floor((32 + ricci) / 8) + 1
    return [k for k in range(1, k_max + 1) if sprite_required(k) < ricci]


def sprite_filter(budget: EnergyBudget) -> list[int]:
    """Degrees k of a b2 = 1 bubble compatible with the Ricci budget, minus k = 1 (Gamma trivial)."""
    if budget.ricci_pi2 > 8:
        raise BudgetTooLarge(f"ricci budget {budget.ricci_pi2} exceeds 8")
    return [k for k in _sprite_candidates(budget.ricci_pi2) if k != 1]


def _sprite_cert(budget: EnergyBudget) -> tuple[ExclusionCertificate, list[int]]:
    ricci = budget.ricci_pi2
    ks = _sprite_candidates(ricci)
    k_max = math.floor((32 + ricci) / 8) + 2
    table = [[k, format_rational(sprite_required(k)), sprite_required(k) < ricci] for k in range(1, k_max + 1)]
    survivors = [k for k in ks if k != 1]
    rejected = [sprite_required(k) - ricci for k in range(1, k_max + 1) if sprite_required(k) >= ricci]
    cert = ExclusionCertificate(
        rule="SpriteRicci",
        candidate="b2 = 1, degree -k",
        data={
            "ricci_budget": format_rational(ricci),
            "table": table,
            "energy_compatible": ks,
            "removed_trivial_gamma": [1] if 1 in ks else [],
            "survivors": survivors,
        },
        margin=min(rejected) if rejected else None,
    )
    if ricci > 8:
        cert.status = FAILED
        raise BudgetTooLarge(f"ricci budget {ricci} exceeds 8", certificate=cert)
    return cert, survivors


def _elf_threshold(wminus: Fraction) -> Fraction:
    """1/|Gamma| must exceed 1 + b2 - wminus/8 at b2 = 2."""
    return 3 - wminus / 8


def elf_filter(budget: EnergyBudget) -> list[BubbleCandidate]:
    return _elf_cert(budget)[1]


def _elf_cert(budget: EnergyBudget) -> tuple[ExclusionCertificate, list[BubbleCandidate]]:
    c = _elf_threshold(budget.wminus_pi2)
    data: dict[str, Any] = {
        "wminus_budget": format_rational(budget.wminus_pi2),
        "inequality": "1 + b2 - 1/|Gamma| < wminus/8 at b2 = 2",
        "inverse_order_threshold": format_rational(c),
    }
    if budget.a_bound == 8:
        data["note"] = "at A = 8 the bound wminus/8 equals 17/6"
    cert = ExclusionCertificate("ElfWminus", "b2 = 2", data, margin=c)
    if c <= 0:
        cert.status = FAILED
        raise InsufficientBudgetGap("W- budget does not bound |Gamma| when b2 = 2", certificate=cert)
    max_order = math.ceil(1 / c) - 1
    survivors = []
    checked = []
    k = 2
    while k * k - 1 <= max_order:
        form = ((-k, 1), (1, -k))
        lens = lens_data(k, k)
        survivors.append(
            BubbleCandidate(2, form, lens.gamma_order, f"Z_{lens.gamma_order}", lens.lens_pair, "(iii)")
        )
        checked.append([k, lens.gamma_order, True])
        k += 1
    checked.append([k, k * k - 1, False])
    data["max_gamma_order"] = max_order
    data["symmetric_k"] = checked
    data["survivors"] = [s.to_json() for s in survivors]
    return cert, survivors


def _residue_table() -> list[list[int]]:
    return [[m, n, (2 * m * m - n * n) % 3] for m in range(3) for n in range(3)]


def brute_force_mod3(bound: int) -> list[tuple[int, int]]:
    """All (m, n) with |m|, |n| <= bound and 2m^2 - n^2 = -3."""
    sols = []
    for m in range(-bound, bound + 1):
        t = 2 * m * m + 3
        n = math.isqrt(t)
        if n * n == t and n <= bound:
            sols.extend([(m, n), (m, -n)])
    return sols


def mod3_obstruction(brute_bound: int = 10**4) -> ExclusionCertificate:
    """Two-step descent showing 2m^2 - n^2 = -3 has no integer solution."""
    table = _residue_table()
    zero_pairs = [[m, n] for m, n, r in table if r == 0]
    step1 = zero_pairs == [[0, 0]]
    # m = 3j, n = 3k: -3 = 18j^2 - 9k^2, i.e. -1 = 6j^2 - 3k^2, whose right side is 0 mod 3
    lhs_mod3 = (-1) % 3
    rhs_mod3 = {(6 * j * j - 3 * k * k) % 3 for j in range(3) for k in range(3)}
    step2 = rhs_mod3 == {0} and lhs_mod3 != 0
    brute = brute_force_mod3(brute_bound)
    cert = ExclusionCertificate(
        rule="CaseI_Mod3",
        candidate="(i) b2 = 1, Gamma = Z_3",
        data={
            "equation": "-3 = 2m^2 - n^2",
            "residue_table": table,
            "zero_residue_pairs": zero_pairs,
            "step2_lhs_mod3": lhs_mod3,
            "step2_rhs_mod3": sorted(rhs_mod3),
            "brute_force_bound": brute_bound,
            "brute_force_solutions": len(brute),
        },
        margin=None,
    )
    if not (step1 and step2) or brute:
        cert.status = FAILED
        raise CertificationError("mod 3 descent failed", certificate=cert)
    return cert


def pell_solutions(bound: int) -> list[tuple[int, int]]:
    """Positive (j, l) with j, l <= bound and j^2 - 2 l^2 = -1, by direct search over l."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    out = []
    for l in range(1, bound + 1):
        t = 2 * l * l - 1
        j = math.isqrt(t)
        if j * j == t and j <= bound:
            out.append((j, l))
    return out


def _sign_lemma_rows(pell: Sequence[tuple[int, int]]) -> list[list]:
    rows = []
    for j0, l0 in pell:
        if j0 * j0 - 2 * l0 * l0 != -1:
            raise SignLemmaFailure(f"({j0}, {l0}) is not a Pell solution")
        for sj in (1, -1):
            for sl in (1, -1):
                j, l = sj * j0, sl * l0
                same_sign = j * (j + l) >= 0
                if j == 0 or not same_sign or abs(j) < abs(l):
                    raise SignLemmaFailure(f"sign lemma fails at (j, l) = ({j}, {l})")
        rows.append([j0, l0])
    return rows


def _sigma(j: int, l: int) -> CohomologyClass:
    return CohomologyClass(j, j, 2 * l)


def area_contradiction(L_enclosure: RootEnclosure, pell: Sequence[tuple[int, int]]) -> ExclusionCertificate:
    """Swap-invariant (-2)-classes have |[w]_unit . Sigma| > 2/(1+K), contradicting area < 2/(K+1)."""
    K = L_enclosure.hi
    rows = _sign_lemma_rows(pell)
    identities = []
    for j, l in pell:
        sigma = _sigma(j, l)
        sq = pair(sigma, sigma)
        # pairing with (1+x)(F1+F2) - xE is affine in x, so two points fix it
        at0, at1 = pair(unit_x_class(0), sigma), pair(unit_x_class(1), sigma)
        ok = sq == -2 and at0 == 2 * j and at1 == 2 * (2 * j + l)
        if not ok:
            raise SignLemmaFailure(f"class identity fails for ({j}, {l})")
        identities.append([j, l, format_rational(sq), format_rational(at0), format_rational(at1)])
    vol = Polynomial([1, 2, Fraction(1, 2)])
    residual = Polynomial([1, 1]) ** 2 - vol
    positivity = certify_positive_on_ray(residual)
    if not isinstance(positivity, (CoefficientCertificate, SturmCertificate)):
        raise SignLemmaFailure("(1+x)^2 > 1 + 2x + x^2/2 could not be certified")
    return ExclusionCertificate(
        rule="CaseII_III_PellArea",
        candidate="(ii) b2 = 1, Gamma = Z_2; (iii) b2 = 2, Gamma = Z_3",
        data={
            "pell_equation": "-1 = j^2 - 2 l^2",
            "pell_solutions": rows,
            "pell_count": len(rows),
            "general_sign_lemma": "j^2 = 2l^2 - 1 is odd and >= l^2, so j != 0, |j| >= |l|, and j, j+l never have opposite signs",
            "class_identities": identities,
            "unit_volume": Polynomial([1, 2, Fraction(1, 2)]).to_json(),
            "residual": residual.to_json(),
            "residual_positivity": positivity.to_json(),
            "K": format_rational(K),
            "L_enclosure": L_enclosure.to_json(),
            "area_bound": format_rational(Fraction(2) / (K + 1)),
            "chain": "|[w]_x . S| = 2|j + (j+l)x| / sqrt(V) >= 2/sqrt(V) > 2/(1+x) > 2/(1+K) > |[w]_x . S|",
        },
        margin=None,
    )


def _survivor_b2_one(k: int) -> BubbleCandidate:
    label = {3: "(i)", 2: "(ii)"}.get(k, f"(k={k})")
    return BubbleCandidate(1, ((-k,),), k, f"Z_{k}", None, label)


@dataclass
class ExclusionRun:
    a_bound: Fraction
    certificates: list[ExclusionCertificate] = field(default_factory=list)
    survivors_before: list[BubbleCandidate] = field(default_factory=list)
    survivors_after: list[BubbleCandidate] = field(default_factory=list)
    verdict: str = "Breakdown"
    breakdown: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict == "NoBubbling"

    def to_json(self) -> dict:
        return {
            "a_bound": format_rational(self.a_bound),
            "certificates": [c.to_json() for c in self.certificates],
            "survivors_before_diophantine": [s.to_json() for s in self.survivors_before],
            "survivors_after_diophantine": [s.to_json() for s in self.survivors_after],
            "verdict": self.verdict,
            "breakdown": self.breakdown,
        }


def _attempt(run: ExclusionRun, rule: str, fn, *args):
    try:
        result = fn(*args)
    except CertificationError as exc:
        cert = exc.certificate or ExclusionCertificate(rule, "", {"error": str(exc)}, status=FAILED)
        cert.data.setdefault("error", str(exc))
        run.certificates.append(cert)
        run.breakdown.append(rule)
        return None
    cert = result[0] if isinstance(result, tuple) else result
    run.certificates.append(cert)
    return result


def _skip(run: ExclusionRun, rule: str, reason: str) -> None:
    run.certificates.append(ExclusionCertificate(rule, "", {"reason": reason}, status=SKIPPED))


def run_full_exclusion(
    a_bound: RationalLike,
    L_enclosure: RootEnclosure,
    dioph_bound: int = 10**4,
    pell_bound: int = 10**6,
) -> ExclusionRun:
    """Budgets, then every exclusion step in order, then the Diophantine kills.

    A failing step is recorded (with its margin) and the run continues where
    later steps do not depend on it, so the breakdown point is visible.
    """
    a_bound = q(a_bound)
    budget = energy_budgets(a_bound)
    run = ExclusionRun(a_bound)
    run.certificates.append(_budget_cert(budget))

    _attempt(run, "TrivialGammaEnergy", exclude_trivial_gamma, budget)
    run.certificates.append(bottom_axiom())
    sig_cert, b2_max = signature_bound()
    run.certificates.append(sig_cert)
    sym = _attempt(run, "ForcedSymmetry", forced_symmetry, budget)
    sprite = _attempt(run, "SpriteRicci", _sprite_cert, budget)
    if sym is None:
        _skip(run, "ElfWminus", "requires ForcedSymmetry")
        elf = None
    else:
        elf = _attempt(run, "ElfWminus", _elf_cert, budget)

    if run.breakdown or sprite is None or elf is None:
        _skip(run, "CaseI_Mod3", "candidate list not finite")
        _skip(run, "CaseII_III_PellArea", "candidate list not finite")
        run.verdict = "Breakdown"
        return run

    b1 = [_survivor_b2_one(k) for k in sprite[1]] if b2_max >= 1 else []
    b2 = elf[1] if b2_max >= 2 else []
    order = {"(i)": 0, "(ii)": 1, "(iii)": 2}
    run.survivors_before = sorted(b1 + b2, key=lambda c: (order.get(c.label, 9), c.b2, c.gamma_order))

    needs_mod3 = [c for c in run.survivors_before if c.generator_self_intersection() == -3]
    needs_pell = [c for c in run.survivors_before if c.generator_self_intersection() == -2]
    killed: set[int] = set()
    if needs_mod3:
        if _attempt(run, "CaseI_Mod3", mod3_obstruction, dioph_bound) is not None:
            killed.update(id(c) for c in needs_mod3)
    if needs_pell:
        pell = pell_solutions(pell_bound)
        if _attempt(run, "CaseII_III_PellArea", area_contradiction, L_enclosure, pell) is not None:
            killed.update(id(c) for c in needs_pell)
    run.survivors_after = [c for c in run.survivors_before if id(c) not in killed]

    if run.breakdown:
        run.verdict = "Breakdown"
        return run
    if run.survivors_after:
        raise IncompleteExclusion(
            "candidates survive every rule: " + ", ".join(c.label or str(c.to_json()) for c in run.survivors_after)
        )
    run.verdict = "NoBubbling"
    run.certificates.append(
        ExclusionCertificate(
            "NoBubbling",
            "all",
            {
                "survivors_before": [c.label for c in run.survivors_before],
                "survivors_after": [],
            },
        )
    )
    return run


def _pq(text: str) -> Fraction:
    return parse_rational(text)


def replay(cert: dict) -> bool:
    """Re-derive a serialized certificate's verdict from its stored data only."""
    rule, data, status = cert["rule"], cert["data"], cert["status"]
    if status == SKIPPED:
        return True
    verdict = _replay_verdict(rule, data, cert.get("margin"))
    return verdict == (status == CERTIFIED)


def _replay_verdict(rule: str, data: dict, margin: Optional[str]) -> bool:
    if rule == "EnergyBudget":
        a = _pq(data["a_bound"])
        b = energy_budgets(a)
        return (
            _pq(data["ricci"]["pi2_coeff"]) == b.ricci_pi2 == 8 * (a - 7)
            and _pq(data["wminus"]["pi2_coeff"]) == b.wminus_pi2 == 12 + Fraction(4, 3) * a
        )
    if rule == "TrivialGammaEnergy":
        ricci = _pq(data["ricci_budget"])
        return ricci <= 8 and _trivial_gamma_b2_max(ricci) == 0 == data["forced_b2_max"]
    if rule == "BottomAxiom":
        return True
    if rule == "SignatureBound":
        pos, neg = signature(data["gram"])
        return (pos, neg) == (data["b_plus"], data["b_minus"]) and data["b2_max"] == neg
    if rule == "ForcedSymmetry":
        single = gauss_bonnet_deficit(*data["min_single_copy_at"])
        return single == _pq(data["min_single_copy"]) and 2 * single > _pq(data["wminus_budget"])
    if rule == "SpriteRicci":
        ricci = _pq(data["ricci_budget"])
        ks = _sprite_candidates(ricci)
        return ricci <= 8 and ks == data["energy_compatible"] and [k for k in ks if k != 1] == data["survivors"]
    if rule == "ElfWminus":
        c = _elf_threshold(_pq(data["wminus_budget"]))
        if c <= 0 or c != _pq(data["inverse_order_threshold"]):
            return False
        max_order = math.ceil(1 / c) - 1
        ks = [k for k in range(2, max_order + 2) if k * k - 1 <= max_order]
        return max_order == data["max_gamma_order"] and [s["form"][0][0] for s in data["survivors"]] == [-k for k in ks]
    if rule == "CaseI_Mod3":
        table_ok = [[m, n] for m, n, r in _residue_table() if r == 0] == [[0, 0]]
        return table_ok and data["brute_force_solutions"] == 0 and not brute_force_mod3(data["brute_force_bound"])
    if rule == "CaseII_III_PellArea":
        pell = [tuple(r) for r in data["pell_solutions"]]
        try:
            _sign_lemma_rows(pell)
        except SignLemmaFailure:
            return False
        residual = Polynomial(_pq(c) for c in data["residual"])
        vol = Polynomial(_pq(c) for c in data["unit_volume"])
        K = _pq(data["K"])
        return (
            residual == Polynomial([1, 1]) ** 2 - vol
            and all(c >= 0 for c in residual.coeffs)
            and not residual.is_zero()
            and K > 0
            and _pq(data["area_bound"]) == 2 / (K + 1)
        )
    if rule == "NoBubbling":
        return data["survivors_after"] == []
    raise ValueError(f"unknown rule {rule!r}")

import json
from fractions import Fraction

import numpy as np
import pytest

from extremal_cert.bubbles import (
    CERTIFIED,
    FAILED,
    SKIPPED,
    BubbleCandidate,
    _elf_threshold,
    area_contradiction,
    brute_force_mod3,
    elf_filter,
    energy_budgets,
    gauss_bonnet_deficit,
    lens_data,
    mod3_obstruction,
    negdef_check,
    pell_solutions,
    replay,
    run_full_exclusion,
    sprite_filter,
)
from extremal_cert.errors import IncompleteExclusion, InvalidBound, SignLemmaFailure
from extremal_cert.exactnum import RatInterval
from extremal_cert.extremal import certify_boundary_L
from extremal_cert.polyalg import RootEnclosure


@pytest.fixture(scope="module")
def L():
    return certify_boundary_L(Fraction(1, 10**3)).L


@pytest.mark.parametrize(
    "a, ricci, wminus",
    [(8, 8, Fraction(68, 3)), (Fraction(15, 2), 4, 22), (9, 16, 24)],
)
def test_energy_budgets(a, ricci, wminus):
    b = energy_budgets(a)
    assert (b.ricci_pi2, b.wminus_pi2) == (ricci, wminus)


def test_budget_rejects_bound_at_c1_squared():
    with pytest.raises(InvalidBound):
        energy_budgets(7)


@pytest.mark.parametrize("b2, order, deficit", [(1, 1, 8), (2, 2, 20), (2, 3, Fraction(64, 3)), (0, 1, 0)])
def test_gauss_bonnet_deficit(b2, order, deficit):
    assert gauss_bonnet_deficit(b2, order) == deficit


def test_lens_data_example():
    d = lens_data(2, 2)
    assert d.gamma_order == 3 and d.lens_pair == (3, 2)
    assert d.gluing == ((-2, 1), (-3, 2))


def test_lens_data_exhaustive_against_numpy():
    for k in range(2, 21):
        for l in range(1, 21):
            d = lens_data(k, l)
            a = np.array([[-k, 1], [1, 0]], dtype=float)
            b = np.array([[-l, 1], [1, 0]], dtype=float)
            glue = np.linalg.inv(a) @ np.array([[0, 1], [1, 0]]) @ b
            assert np.allclose(glue, np.array(d.gluing, dtype=float))
            assert abs(d.determinant) == 1
            assert d.gamma_order == k * l - 1


def test_negdef_iff_kl_above_one():
    for k in range(1, 8):
        for l in range(1, 8):
            assert negdef_check([[-k, 1], [1, -l]]) == (k * l > 1)
    assert negdef_check([[-2]]) and not negdef_check([[1]])


def test_bubble_candidate_validates_form():
    with pytest.raises(ValueError):
        BubbleCandidate(2, ((-1, 1), (1, -1)), 0, "Z_0")
    c = BubbleCandidate(2, ((-2, 1), (1, -2)), 3, "Z_3")
    assert c.generator_self_intersection() == -2


def test_sprite_and_elf_filters():
    b = energy_budgets(8)
    assert sprite_filter(b) == [2, 3]
    assert _elf_threshold(b.wminus_pi2) == Fraction(1, 6)
    elves = elf_filter(b)
    assert [(e.gamma_order, e.lens) for e in elves] == [(3, (3, 2))]


def test_mod3_matches_brute_force():
    assert brute_force_mod3(2000) == []
    cert = mod3_obstruction(2000)
    assert cert.status == CERTIFIED
    assert cert.data["zero_residue_pairs"] == [[0, 0]]
    # independent oracle: no residue pair other than (0, 0) makes 2m^2 - n^2 vanish mod 3
    assert {(m, n) for m in range(3) for n in range(3) if (2 * m * m - n * n) % 3 == 0} == {(0, 0)}


def test_pell_matches_recurrence():
    sols = pell_solutions(10**6)
    expected = [(1, 1)]
    while True:
        j, l = expected[-1]
        nxt = (3 * j + 4 * l, 2 * j + 3 * l)
        if max(nxt) > 10**6:
            break
        expected.append(nxt)
    assert sols == expected
    assert all(j * j - 2 * l * l == -1 for j, l in sols)


def test_area_contradiction_data(L):
    cert = area_contradiction(L, pell_solutions(1000))
    assert cert.status == CERTIFIED
    for j, l, sq, at0, at1 in cert.data["class_identities"]:
        assert sq == "-2/1"
        assert at0 == f"{2 * j}/1" and at1 == f"{2 * (2 * j + l)}/1"
    assert cert.data["residual"] == ["0/1", "0/1", "1/2"]


def test_area_rejects_non_pell_pair(L):
    with pytest.raises(SignLemmaFailure):
        area_contradiction(L, [(2, 1)])


@pytest.mark.parametrize("a", [Fraction(15, 2), Fraction(31, 4), Fraction(8), 8 - Fraction(1, 1000)])
def test_full_run_certifies(a, L):
    run = run_full_exclusion(a, L, 500, 10**4)
    assert run.verdict == "NoBubbling" and run.ok
    assert [c.label for c in run.survivors_before] == ["(i)", "(ii)", "(iii)"]
    assert run.survivors_after == []
    assert all(c.status == CERTIFIED for c in run.certificates)


def test_breakdown_at_nine(L):
    run = run_full_exclusion(9, L, 100, 100)
    assert run.verdict == "Breakdown" and not run.ok
    assert run.breakdown == ["TrivialGammaEnergy", "ForcedSymmetry", "SpriteRicci"]
    by_rule = {c.rule: c for c in run.certificates}
    assert by_rule["ForcedSymmetry"].status == FAILED
    assert by_rule["ForcedSymmetry"].margin == 0
    assert by_rule["CaseI_Mod3"].status == SKIPPED


def test_replay_after_json_round_trip(L):
    run = run_full_exclusion(8, L, 200, 10**4)
    for cert in json.loads(json.dumps(run.to_json()))["certificates"]:
        assert replay(cert), cert["rule"]


def test_replay_detects_tampering(L):
    run = run_full_exclusion(8, L, 200, 10**4)
    certs = json.loads(json.dumps(run.to_json()))["certificates"]
    sym = next(c for c in certs if c["rule"] == "ForcedSymmetry")
    sym["data"]["wminus_budget"] = "24/1"
    assert not replay(sym)


def test_incomplete_exclusion_when_kill_is_missing(monkeypatch, L):
    import extremal_cert.bubbles as bubbles

    # a candidate whose generator square is neither -2 nor -3 survives every rule
    def fake_sprite(budget):
        cert, _ = original(budget)
        return cert, [2, 3, 4]

    original = bubbles._sprite_cert
    monkeypatch.setattr(bubbles, "_sprite_cert", fake_sprite)
    with pytest.raises(IncompleteExclusion):
        run_full_exclusion(8, L, 50, 50)


def test_custom_enclosure_is_used():
    enc = RootEnclosure(RatInterval(Fraction(7), Fraction(15, 2)))
    cert = area_contradiction(enc, pell_solutions(50))
    assert cert.data["K"] == "15/2"
    assert cert.data["area_bound"] == "4/17"

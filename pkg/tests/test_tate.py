import pytest

from eiscong.eisenstein import QuotientSpec, eisenstein_series, quotient_series, replacement_lift
from eiscong.filtration import ModularFormModEll, sturm
from eiscong.scanner import certificate_precision, profile_precision
from eiscong.series import PrecisionError, TruncatedSeries
from eiscong.tate import (
    certified_residues,
    heuristic_simple_congruences,
    legendre,
    rigorous_simple_congruence,
    tate_cycle,
    theta_vanishes,
    theta_vanishing_prime_candidates,
    theta_zero_congruences_hold,
)


def lifted_form(spec, ell, terms):
    return ModularFormModEll.from_lift(replacement_lift(spec, ell, terms))


EXAMPLE = QuotientSpec(0, -12, 1)  # E6 / E4^12
NONRESIDUES_17 = (3, 5, 6, 7, 10, 11, 12, 14)


# ---------------------------------------------------------------------------
# legendre


def test_legendre_examples():
    assert legendre(0, 17) == 0
    assert legendre(2, 17) == 1   # 6^2 = 36 = 2 mod 17
    assert legendre(3, 17) == -1


def test_legendre_against_brute_force():
    for ell in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        squares = {pow(x, 2, ell) for x in range(1, ell)}
        for c in range(ell):
            expected = 0 if c == 0 else (1 if c in squares else -1)
            assert legendre(c, ell) == expected


def test_legendre_rejects_composites():
    with pytest.raises(ValueError):
        legendre(2, 15)


# ---------------------------------------------------------------------------
# tate cycles


def test_cycle_of_the_certified_example_at_17():
    form = lifted_form(EXAMPLE, 17, profile_precision(EXAMPLE, 17))
    profile = tate_cycle(form)
    assert profile.base_filtration == 128
    # the filtration climbs by 18 from each low point and falls twice
    expected = tuple(146 + 18 * (i % 8) for i in range(16))
    assert profile.filtrations == expected
    assert profile.high_points == (8, 16)
    assert profile.low_points == (9, 1)
    assert profile.falls == (9, 9)
    assert all(profile.filtrations[i - 1] % 17 == 10 for i in profile.low_points)


def test_cycle_of_e4_mod_13_rises_until_the_high_point():
    ell = 13
    terms = sturm(4 + (ell - 1) * (ell + 1)) + 1
    form = ModularFormModEll(ell, 4, eisenstein_series(4, ell, terms))
    profile = tate_cycle(form)
    assert profile.base_filtration == 4
    for i in range(1, 10):
        assert profile.filtrations[i - 1] == 4 + 14 * i
    assert 9 in profile.high_points
    assert len(profile.low_points) in (1, 2)


def test_cycle_requires_enough_precision():
    form = lifted_form(EXAMPLE, 17, 10)
    with pytest.raises(PrecisionError):
        tate_cycle(form)


def test_cycle_cap():
    form = lifted_form(QuotientSpec(0, 0, 0), 59, 10)
    with pytest.raises(ValueError):
        tate_cycle(form, cap=53)


def test_cycle_rejects_theta_killed_forms():
    # the lift of 1/E4 mod 5 is a 5th power, so theta kills it
    spec = QuotientSpec(0, -1, 0)
    form = lifted_form(spec, 5, profile_precision(spec, 5))
    with pytest.raises(ValueError):
        tate_cycle(form)


# ---------------------------------------------------------------------------
# rigorous certificates


def test_certificate_at_17():
    form = lifted_form(EXAMPLE, 17, certificate_precision(EXAMPLE, 17))
    assert rigorous_simple_congruence(form, 3) is True
    assert rigorous_simple_congruence(form, 2) is False
    assert certified_residues(form) == NONRESIDUES_17


def test_certificate_rejects_c_zero():
    form = lifted_form(EXAMPLE, 17, certificate_precision(EXAMPLE, 17))
    with pytest.raises(ValueError):
        rigorous_simple_congruence(form, 0)


def test_no_congruences_at_19():
    form = lifted_form(EXAMPLE, 19, certificate_precision(EXAMPLE, 19))
    assert certified_residues(form) == ()
    assert all(not rigorous_simple_congruence(form, c) for c in range(1, 19))


def test_certificate_requires_enough_precision():
    form = lifted_form(EXAMPLE, 17, 10)
    with pytest.raises(PrecisionError):
        rigorous_simple_congruence(form, 3)


def test_certificate_rejects_theta_killed_forms():
    spec = QuotientSpec(0, -1, 0)
    form = lifted_form(spec, 5, certificate_precision(spec, 5))
    with pytest.raises(ValueError):
        rigorous_simple_congruence(form, 1)


def test_flagged_residues_form_quadratic_classes():
    # flagged sets are unions of the two quadratic classes, never less
    for spec in (QuotientSpec(0, -1, 0), QuotientSpec(0, 1, -1), QuotientSpec(1, 0, -1)):
        for ell in (5, 7, 11, 13, 17):
            form = lifted_form(spec, ell, certificate_precision(spec, ell))
            try:
                flagged = set(certified_residues(form))
            except ValueError:
                continue  # theta-killed: a different regime entirely
            residues = {c for c in range(1, ell) if legendre(c, ell) == 1}
            nonresidues = set(range(1, ell)) - residues
            assert flagged in (set(), residues, nonresidues, residues | nonresidues)


def test_fermat_closure_for_e6_mod_11():
    f = eisenstein_series(6, 11, 40)
    once = f.theta()
    many = f
    for _ in range(11):
        many = many.theta()
    assert many == once


def test_certified_congruences_force_the_cycle_shape():
    # wherever a congruence is certified at some c != 0, the cycle has two
    # low points, every fall is (ell+1)/2, low filtrations are (ell+3)/2
    # mod ell, and with the base filtration written A*ell + B the bounds
    # (ell+1)/2 <= B <= A + (ell+3)/2 hold
    cases = [
        (QuotientSpec(0, -12, 1), 17),
        (QuotientSpec(0, -1, 0), 11),
        (QuotientSpec(1, -1, 0), 7),
        (QuotientSpec(0, 1, -1), 7),
    ]
    for spec, ell in cases:
        form = lifted_form(spec, ell, certificate_precision(spec, ell))
        assert certified_residues(form) != ()
        profile = tate_cycle(lifted_form(spec, ell, profile_precision(spec, ell)))
        assert len(profile.low_points) == 2
        assert profile.falls == ((ell + 1) // 2, (ell + 1) // 2)
        for i in profile.low_points:
            assert profile.filtrations[i - 1] % ell == (ell + 3) // 2 % ell
        quotient_part, remainder = divmod(profile.base_filtration, ell)
        if remainder == 0:
            quotient_part, remainder = quotient_part - 1, ell
        assert (ell + 1) // 2 <= remainder <= quotient_part + (ell + 3) // 2


# ---------------------------------------------------------------------------
# window detection


def test_heuristic_on_constant_quotient():
    series = quotient_series(QuotientSpec(1, 0, -1), 3, 200)  # anything mod 3 is 1
    assert heuristic_simple_congruences(series, 3) == {1, 2}


def test_heuristic_inverse_e4():
    # mod 3 the quotient is identically 1, so both nonzero classes vanish
    series = quotient_series(QuotientSpec(0, -1, 0), 3, 200)
    assert heuristic_simple_congruences(series, 3) == {1, 2}
    # mod 9 only the class from the published table survives
    series9 = quotient_series(QuotientSpec(0, -1, 0), 9, 200)
    assert heuristic_simple_congruences(series9, 3) == {2}


def test_heuristic_on_zero_series():
    assert heuristic_simple_congruences(TruncatedSeries.zero(5, 40), 5) == {0, 1, 2, 3, 4}


def test_heuristic_rejects_poles():
    with pytest.raises(ValueError):
        heuristic_simple_congruences(TruncatedSeries(5, [1, 1], valuation=-1), 5)


def test_theta_vanishes_examples():
    assert theta_vanishes(QuotientSpec(0, 1, 1), 11, 600)
    assert not theta_vanishes(QuotientSpec(0, 1, 1), 13, 600)
    assert theta_vanishes(QuotientSpec(144, -15, -14), 13, 600)


def test_theta_zero_constraints():
    spec = QuotientSpec(144, -15, -14)
    for ell in (5, 7, 13):
        assert theta_zero_congruences_hold(spec, ell)
    assert not theta_zero_congruences_hold(spec, 11)
    assert not theta_zero_congruences_hold(QuotientSpec(0, 1, 1), 13)


def test_candidates_for_the_weight_ten_product():
    assert theta_vanishing_prime_candidates(QuotientSpec(0, 1, 1), 600) == {2, 3, 11}


def test_candidates_for_the_large_example():
    got = theta_vanishing_prime_candidates(QuotientSpec(144, -15, -14), 600)
    assert got == {2, 3, 5, 7, 13}


def test_candidates_for_the_identity_quotient():
    assert theta_vanishing_prime_candidates(QuotientSpec(0, 0, 0)) is None


def test_candidates_include_gcd_primes_above_13():
    # every exponent divisible by 17 makes the quotient a 17th power
    got = theta_vanishing_prime_candidates(QuotientSpec(17, 17, -17), 300)
    assert 17 in got

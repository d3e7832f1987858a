import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eiscong.series import (
    ModulusMismatchError,
    PrecisionError,
    TruncatedSeries,
    _convolve,
)


def TS(modulus, coeffs, valuation=0):
    return TruncatedSeries(modulus, coeffs, valuation)


# ---------------------------------------------------------------------------
# construction and normalization


def test_residues_are_canonical():
    f = TS(5, [7, -1, 10])
    assert f.coeffs == (2, 4, 0)


def test_leading_zeros_raise_the_valuation():
    f = TS(7, [0, 0, 3, 0])
    assert f.valuation == 2
    assert f.coeffs == (3, 0)
    assert f.precision == 4


def test_zero_series_is_canonical_at_valuation_zero():
    f = TS(7, [0, 0, 0], valuation=-1)
    assert f.valuation == 0
    assert f.coeffs == (0, 0)
    assert f.precision == 2
    assert f.is_zero()


def test_window_length_matches_precision():
    f = TS(9, [1, 2, 3], valuation=-2)
    assert len(f.coeffs) == f.precision - f.valuation


def test_modulus_below_two_rejected():
    with pytest.raises(ValueError):
        TS(1, [1])


def test_coefficient_lookups():
    f = TS(7, [3, 0, 5], valuation=-1)
    assert f.coefficient(-1) == 3
    assert f.coefficient(-5) == 0  # below the valuation the series is zero
    assert f.coefficient(1) == 5
    with pytest.raises(PrecisionError):
        f.coefficient(2)


# ---------------------------------------------------------------------------
# add


def test_add_cancellation():
    f = TS(5, [1, 1, 0])
    g = TS(5, [1, -1, 0])
    total = f + g
    assert total.valuation == 0
    assert total.coeffs == (2, 0, 0)


def test_add_identity():
    f = TS(11, [3, 1, 4])
    assert f + TS(11, [0, 0, 0]) == f


def test_add_merges_laurent_windows():
    f = TS(7, [1, 1, 0], valuation=-1)  # q^-1 + 1, known through q
    g = TS(7, [1, 1])                    # 1 + q
    total = f + g
    assert total.valuation == -1
    assert total.coeffs == (1, 2, 1)


def test_add_requires_equal_moduli():
    with pytest.raises(ModulusMismatchError):
        TS(5, [1]) + TS(7, [1])


def test_add_precision_is_the_minimum():
    f = TS(5, [1, 1, 1, 1])
    g = TS(5, [1, 1])
    assert (f + g).precision == 2


# ---------------------------------------------------------------------------
# mul


def test_mul_difference_of_squares():
    f = TS(5, [1, 1, 0])
    g = TS(5, [1, -1, 0])
    assert (f * g).coeffs == (1, 0, 4)


def test_mul_identity():
    f = TS(13, [2, 0, 7, 1])
    assert f * TruncatedSeries.one(13, 4) == f


def test_e4_times_e6_mod_11_matches_direct_convolution():
    # oracle: hand convolution of the integer expansions
    e4 = [1, 240, 2160]
    e6 = [1, -504, -16632]
    oracle = [sum(e4[i] * e6[k - i] for i in range(k + 1)) % 11 for k in range(3)]
    assert oracle == [1, 0, 0]
    prod = TS(11, e4) * TS(11, e6)
    assert list(prod.coeffs) == oracle


def test_mul_precision_rule():
    f = TS(5, [1, 2], valuation=3)   # known on [3, 5)
    g = TS(5, [1, 1, 1])             # known on [0, 3)
    prod = f * g
    assert prod.valuation == 3
    assert prod.precision == min(f.precision + g.valuation, g.precision + f.valuation)


def test_convolve_falls_back_for_huge_moduli():
    m = 2**62
    a = [m - 1, m - 2]
    b = [m - 1, 1]
    out = _convolve(a, b, m)
    assert out == [((m - 1) * (m - 1)) % m, ((m - 1) + (m - 2) * (m - 1)) % m, (m - 2) % m]


# ---------------------------------------------------------------------------
# invert / pow


def test_invert_geometric_series():
    f = TS(7, [1, -1, 0, 0])
    assert f.invert().coeffs == (1, 1, 1, 1)


def test_invert_one():
    one = TruncatedSeries.one(5, 6)
    assert one.invert() == one


def test_invert_e4_mod_9_kills_q2():
    e4 = TS(9, [1, 240, 2160])
    assert e4.invert().coefficient(2) == 0


def test_invert_requires_unit_constant():
    with pytest.raises(ValueError):
        TS(9, [3, 1]).invert()


def test_invert_requires_valuation_zero():
    with pytest.raises(ValueError):
        TS(9, [1, 1], valuation=1).invert()


def test_pow_zero_is_one():
    f = TS(5, [2, 3, 1])
    assert f.pow(0) == TruncatedSeries.one(5, 3)


def test_pow_negative_one_inverts():
    f = TS(7, [1, 3, 5, 2])
    assert (f.pow(-1) * f).agrees_with(TruncatedSeries.one(7, 4))


def test_pow_five_mod_five_is_frobenius():
    f = TS(5, [1, 1, 0, 0, 0, 0])
    assert f.pow(5).coeffs == (1, 0, 0, 0, 0, 1)


# ---------------------------------------------------------------------------
# theta / extraction / modulus change / shift


def test_theta_scales_by_exponent():
    f = TS(11, [1, 1, 4])
    assert f.theta().valuation == 1
    assert f.theta().coeffs == (1, 8)


def test_theta_kills_constants():
    assert TS(7, [4, 0, 0]).theta().is_zero()


def test_theta_handles_negative_exponents():
    f = TS(7, [1, 0, 1], valuation=-2)
    assert f.theta().coefficient(-2) == (-2 * 1) % 7


def test_theta_seven_iterations_equals_one_mod_7():
    rng = random.Random(7)
    f = TS(7, [rng.randrange(7) for _ in range(50)])
    once = f.theta()
    many = f
    for _ in range(7):
        many = many.theta()
    assert many == once


def test_extract_progression():
    f = TS(10, [1, 2, 3, 4])
    sub = f.extract_progression(1, 2)
    assert sub.coeffs == (2, 4)
    assert sub.precision == 2


def test_extract_progression_of_zero():
    assert TS(5, [0] * 6).extract_progression(2, 3).is_zero()


def test_extract_progression_validates_residue():
    with pytest.raises(ValueError):
        TS(5, [1, 2]).extract_progression(3, 2)


def test_change_modulus_reduces():
    f = TS(81, [80, 3, 9])
    g = f.change_modulus(3)
    assert g.modulus == 3
    assert g.coeffs == (2, 0, 0)


def test_change_modulus_identity():
    f = TS(12, [5, 7])
    assert f.change_modulus(12) == f


def test_change_modulus_requires_divisor():
    with pytest.raises(ValueError):
        TS(12, [5]).change_modulus(5)


def test_shift_moves_the_window():
    f = TS(5, [1, 2]).shift(-3)
    assert f.valuation == -3
    assert f.precision == -1
    assert f.coefficient(-2) == 2


def test_str_forms():
    assert str(TruncatedSeries.one(7, 5)) == "1"
    assert str(TS(7, [0, 0])) == "0"
    assert str(TS(7, [1, 2, 1])) == "1 + 2*q + q^2"
    assert str(TS(7, [3], valuation=-2)) == "3*q^-2"


# ---------------------------------------------------------------------------
# algebraic laws on random inputs

moduli = st.sampled_from([2, 3, 5, 7, 11, 13, 49, 81, 243])
primes = st.sampled_from([5, 7, 11, 13])


@st.composite
def series(draw, modulus=None, max_len=20, laurent=True):
    m = modulus if modulus is not None else draw(moduli)
    n = draw(st.integers(min_value=1, max_value=max_len))
    coeffs = draw(st.lists(st.integers(min_value=0, max_value=m - 1), min_size=n, max_size=n))
    v = draw(st.integers(min_value=-4, max_value=4)) if laurent else 0
    return TruncatedSeries(m, coeffs, v)


@st.composite
def series_pair(draw, count=2, **kwargs):
    m = draw(moduli)
    return tuple(draw(series(modulus=m, **kwargs)) for _ in range(count))


@given(series_pair())
def test_mul_commutes(pair):
    f, g = pair
    assert f * g == g * f


@given(series_pair(count=3, max_len=12))
def test_mul_associates_on_the_common_window(triple):
    f, g, h = triple
    assert ((f * g) * h).agrees_with(f * (g * h))


@given(series_pair(count=3, max_len=12))
def test_mul_distributes_over_add(triple):
    f, g, h = triple
    assert (f * (g + h)).agrees_with(f * g + f * h)


@given(series_pair())
def test_theta_product_rule(pair):
    f, g = pair
    lhs = (f * g).theta()
    rhs = f.theta() * g + f * g.theta()
    assert lhs.agrees_with(rhs)


@given(series(laurent=False))
def test_invert_is_two_sided(f):
    unit = TruncatedSeries(f.modulus, (1,) + f.coeffs[1:])
    one = TruncatedSeries.one(f.modulus, len(unit.coeffs))
    assert (unit * unit.invert()).agrees_with(one)
    assert (unit.invert() * unit).agrees_with(one)


@settings(max_examples=60)
@given(primes, st.data())
def test_fermat_cycle(ell, data):
    f = data.draw(series(modulus=ell))
    once = f.theta()
    many = f
    for _ in range(ell):
        many = many.theta()
    assert many == once


@settings(max_examples=60)
@given(primes, st.data())
def test_frobenius_support(ell, data):
    f = data.draw(series(modulus=ell, max_len=10))
    power = f.pow(ell)
    for n in range(power.valuation, power.precision):
        if power.coefficient(n):
            assert n % ell == 0

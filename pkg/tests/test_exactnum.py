import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonneg_sturm.exactnum import (
    bernoulli,
    bernoulli_table,
    divisor_count,
    divisors,
    eisenstein_factor,
    fraction_from_str,
    fraction_to_str,
    gcd3,
    modinv,
    sigma,
)


@pytest.mark.parametrize(
    "k, value",
    [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (4, Fraction(-1, 30)),
     (12, Fraction(-691, 2730))],
)
def test_bernoulli_values(k, value):
    assert bernoulli(k) == value


def test_bernoulli_recurrence_through_120():
    B = bernoulli_table(121)
    for m in range(1, 121):
        assert sum(math.comb(m + 1, j) * B[j] for j in range(m + 1)) == 0


def test_odd_bernoulli_vanish_in_table_and_are_refused():
    B = bernoulli_table(60)
    assert all(B[k] == 0 for k in range(3, 61, 2))
    with pytest.raises(ValueError):
        bernoulli(3)


@pytest.mark.parametrize("e, n, value", [(11, 1, 1), (11, 2, 2049), (23, 6, 1 + 2**23 + 3**23 + 6**23), (0, 12, 6)])
def test_sigma_values(e, n, value):
    assert sigma(e, n) == value


@given(st.integers(1, 2000), st.integers(1, 2000), st.integers(0, 13))
def test_sigma_multiplicative(m, n, e):
    if math.gcd(m, n) == 1:
        assert sigma(e, m * n) == sigma(e, m) * sigma(e, n)


def test_divisor_count_bounds_up_to_1e5():
    for n in range(1, 10**5 + 1):
        d = divisor_count(n)
        assert d <= 2 * math.isqrt(n) + 1
        assert d * d <= 4 * n


@given(st.integers(1, 5000))
def test_divisors_agree_with_brute_force(n):
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]
    assert divisor_count(n) == len(divisors(n))


@pytest.mark.parametrize("k, value", [(4, 240), (12, Fraction(65520, 691)), (8, 480)])
def test_eisenstein_factor_values(k, value):
    assert eisenstein_factor(k) == value


def test_eisenstein_factor_positive():
    assert all(eisenstein_factor(k) > 0 for k in range(4, 121, 4))


@pytest.mark.parametrize("k", [2, 6, 10, 0])
def test_eisenstein_factor_rejects(k):
    with pytest.raises(ValueError):
        eisenstein_factor(k)


@given(st.integers(2, 10**6), st.integers(1, 10**6))
def test_modinv(c, x):
    if math.gcd(x, c) == 1:
        assert (x * modinv(x, c)) % c == 1
    else:
        with pytest.raises(ValueError):
            modinv(x, c)


@given(st.fractions())
def test_fraction_string_round_trip(x):
    s = fraction_to_str(x)
    assert "." not in s
    assert fraction_from_str(s) == x


def test_fraction_from_str_rejects_decimals():
    with pytest.raises(ValueError):
        fraction_from_str("0.5")


def test_gcd3():
    assert gcd3(12, 18, 30) == 6 and gcd3(7, 0, 0) == 7

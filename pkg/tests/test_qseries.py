import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonneg_sturm.qseries import (
    CanonicalBasis,
    PrecisionError,
    QExpansion,
    delta_power,
    delta_qexp,
    dimension_ell,
    eisenstein_qexp,
    j_qexp,
    miller_basis,
    series_mul,
)


def q(*coeffs, precision=None):
    return QExpansion(list(coeffs), 0, precision or len(coeffs))


def brute_delta(n):
    """q * prod_{m>=1} (1 - q^m)^24 to n terms by repeated multiplication."""
    poly = [0] * n
    poly[1] = 1
    for m in range(1, n):
        for _ in range(24):
            for i in range(n - 1, m - 1, -1):
                poly[i] -= poly[i - m]
    return poly


def test_product_example():
    assert q(1, 1, 0) * q(1, -1, 0) == q(1, 0, -1)


def test_delta_squared_prefix():
    d2 = delta_qexp(8) * delta_qexp(8)
    assert d2.coeff_list(0, 6) == [0, 0, 1, -48, 1080, -15040]
    assert delta_power(2, 8).coeff_list(0, 6) == [0, 0, 1, -48, 1080, -15040]


def test_tau_values():
    d = delta_qexp(40)
    assert d[1] == 1 and d[2] == -24 and d[3] == 252
    assert d.coeff_list(0, 40) == brute_delta(40)


def test_associativity_e4_cubed():
    e4 = eisenstein_qexp(4, 20)
    assert ((e4 * e4) * e4)[1] == (e4 * (e4 * e4))[1]
    assert (e4 * e4) * e4 == e4 * (e4 * e4)


@pytest.mark.parametrize("k, c1", [(4, 240), (12, Fraction(65520, 691))])
def test_eisenstein_q_coefficient(k, c1):
    e = eisenstein_qexp(k, 10)
    assert e[0] == 1 and e[1] == c1


def test_e4_cubed_minus_e6_squared():
    n = 60
    e4, e6 = eisenstein_qexp(4, n), eisenstein_qexp(6, n)
    assert e4 ** 3 - e6 * e6 == delta_qexp(n) * 1728


def test_j_times_delta():
    n = 50
    assert j_qexp(n) * delta_qexp(n) == eisenstein_qexp(4, n) ** 3
    assert j_qexp(n)[-1] == 1 and j_qexp(n)[0] == 744 and j_qexp(n)[1] == 196884


def test_miller_basis_weight_12():
    b = miller_basis(12, 10)
    assert b.ell == 1
    assert b.forms[1] == delta_qexp(10)
    assert b.forms[0][0] == 1 and b.forms[0][1] == 0 and b.forms[0][2] == 196560


def test_miller_basis_weight_24():
    b = miller_basis(24, 10)
    assert b.forms[2].coeff_list(0, 6) == [0, 0, 1, -48, 1080, -15040]
    assert b.forms[1].coeff_list(0, 5) == [0, 1, 0, 195660, 12080128]
    assert b.forms[0].coeff_list(0, 5) == [1, 0, 0, 52416000, 39007332000]


def test_weight_24_inequalities():
    b = miller_basis(24, 10)
    rows = {n: (b.forms[0][n], b.forms[1][n], b.forms[2][n]) for n in range(1, 7)}
    assert rows == {
        1: (0, 1, 0),
        2: (0, 0, 1),
        3: (52416000, 195660, -48),
        4: (39007332000, 12080128, 1080),
        5: (6609020221440, 44656110, -15040),
        6: (437824977408000, -982499328, 143820),
    }


@pytest.mark.parametrize("k", list(range(0, 121, 4)))
def test_miller_basis_echelon_and_integrality(k):
    b = miller_basis(k, 200)
    assert b.ell == dimension_ell(k) == k // 12
    for m, f in enumerate(b.forms):
        assert f.is_integral()
        assert [f[r] for r in range(b.ell + 1)] == [int(r == m) for r in range(b.ell + 1)]


def test_basis_json_round_trip():
    b = miller_basis(36, 30)
    doc = json.loads(b.dumps())
    assert set(doc) == {"weight", "ell", "precision", "forms"}
    assert all(isinstance(c, str) for form in doc["forms"] for _, c in form)
    assert CanonicalBasis.from_json(doc) == b


def test_precision_error():
    f = delta_qexp(5)
    with pytest.raises(PrecisionError):
        f[5]


def test_series_mul_precision():
    a = QExpansion([1, 2, 3], 0, 3)
    b = QExpansion([1, 1], 1, 3)  # q + q^2 + O(q^3)
    c = series_mul(a, b)
    assert c.precision == 3
    assert c[1] == 1 and c[2] == 3


def test_inverse_and_division():
    e4 = eisenstein_qexp(4, 30)
    assert e4 * e4.inverse() == QExpansion.one(30)
    assert (e4 * e4) / e4 == e4


def test_qexpansion_json_round_trip():
    f = QExpansion([Fraction(1, 3), 0, -7], 2, 6)
    assert QExpansion.from_json(json.loads(json.dumps(f.to_json()))) == f


series = st.lists(st.integers(-50, 50), min_size=6, max_size=6).map(lambda c: QExpansion(c, 0, 6))


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QExpansion([0] * 6, 0, 6)

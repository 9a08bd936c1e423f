"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are printed
even when output capture is on.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nonneg_sturm.bounds import theorem1_bounds, tail_bound, theorem3_bound, thm54_threshold, coefficient_caps
from nonneg_sturm.exactnum import divisor_count, eisenstein_factor, gcd3, sigma
from nonneg_sturm.interval import Interval, _to_fraction, working_precision
from nonneg_sturm.pipeline import TABLE_WEIGHTS, run_weight
from nonneg_sturm.poincare import certify_sign, kloosterman, poincare_coeff
from nonneg_sturm.polytope import (
    LinearInequality,
    fm_implies,
    implies,
    inequalities,
    polytope_summary,
    vertex_implies,
)
from nonneg_sturm.qseries import delta_qexp, miller_basis

TABLE1 = {
    12: (1, 2, 32), 16: (2, 3, 128), 20: (3, 4, 366), 24: (4, 6, 851), 28: (5, 8, 1728),
    32: (7, 10, 3177), 36: (8, 12, 5422), 40: (10, 14, 8727), 44: (12, 16, 13403), 48: (14, 19, 19807),
    52: (17, 22, 28341), 56: (20, 26, 39459), 60: (23, 29, 53663), 64: (26, 33, 71508), 68: (29, 36, 93600),
    72: (32, 41, 120598), 76: (36, 45, 153217), 80: (40, 49, 192226), 84: (44, 54, 238450), 88: (48, 59, 292773),
}
# k: (t, C2, B(k), A(k))
TABLE2 = {
    12: (2, 6.89e12, 171, 2), 16: (3, 2.40e13, 73, 3), 20: (4, 6.79e13, 50, 4), 24: (7, 6.37e16, 71, 6),
    28: (8, 1.58e17, 61, 8), 32: (10, 4.66e16, 49, 10), 36: (12, 2.37e17, 51, 12), 40: (14, 4.82e17, 51, 14),
    44: (16, 9.90e17, 52, 16), 48: (22, 8.88e20, 70, 19), 52: (24, 1.19e21, 70, 22), 56: (28, 4.69e22, 80, 26),
    60: (51, 1.92e30, 147, 29), 64: (74, 3.23e33, 182, 33), 68: (36, 6.00e23, 90, 36), 72: (56, 3.70e28, 125, 41),
    76: (48, 1.41e26, 108, 45), 80: (91, 4.59e34, 182, 49), 84: (84, 1.03e33, 165, 54), 88: (60, 1.72e26, 116, 59),
}

PENTAGON_FORMS = [((-1, 1), 1), ((1, -1), 2), ((1, 1096077), 3), ((434170, 1728600000), 5), ((445624, 1), 6)]


def criterion(capsys, number, title, check):
    try:
        detail = check()
        ok = True
    except AssertionError as exc:
        ok, detail = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
    with capsys.disabled():
        print(f"\nCRITERION {number} {'PASS' if ok else 'FAIL'}: {title} [{detail}]")
    assert ok, detail


@pytest.fixture(scope="module")
def runs():
    return {k: run_weight(k) for k in TABLE_WEIGHTS}


def test_criterion_1_table1(capsys, runs):
    def check():
        bad = []
        for k, expect in TABLE1.items():
            L, U = theorem1_bounds(k)
            got = (L, runs[k].a.A, U)
            if got != expect:
                bad.append(f"k={k}: {got} != {expect}")
        assert not bad, "; ".join(bad)
        return "20/20 rows exact"

    criterion(capsys, 1, "table1 rows (L, A, U) for k = 12..88", check)


def test_criterion_2_table2(capsys, runs):
    def check():
        bad = []
        worst = 1.0
        for k, (t, c2, B, A) in TABLE2.items():
            rep = runs[k].report
            ratio = float(rep.C2.hi) / c2
            worst = max(worst, ratio, 1 / ratio)
            if rep.t != t or runs[k].a.A != A:
                bad.append(f"k={k}: t={rep.t}, A={runs[k].a.A}")
            if not (abs(rep.Bk - B) <= 0.2 * B and rep.Bk >= runs[k].a.A):
                bad.append(f"k={k}: B={rep.Bk} vs {B}")
            if not 0.5 <= ratio <= 2:
                bad.append(f"k={k}: C2 ratio {ratio:.3f}")
        assert not bad, "; ".join(bad)
        exact_B = sum(runs[k].report.Bk == v[2] for k, v in TABLE2.items())
        return f"t, A exact; B exact for {exact_B}/20; C2 worst ratio {worst:.4f}"

    criterion(capsys, 2, "table2 rows (t, C2, B, A) for k = 12..88", check)


def test_criterion_3_weight_24(capsys):
    def check():
        basis = miller_basis(24, 201)
        summary = polytope_summary(24, basis, 71)
        assert summary.active == (1, 2, 3, 5, 6), f"active set {summary.active}"
        for a, neg in PENTAGON_FORMS:
            f = basis.combination([Fraction(x) for x in a])
            negs = [n for n in range(201) if f[n] < 0]
            assert negs == [neg], f"form {a}: negative at {negs}"
        ineq = inequalities(basis, 71)
        prem = [ineq[n] for n in (1, 2, 3, 5, 6)]
        for n in range(7, 72):
            res = implies(prem, ineq[n])
            assert res.holds and not res.vacuous and res.certificate.verify(prem, ineq[n]), f"n={n}"
        return "active {1,2,3,5,6}; 5 forms with one negative coefficient; 65 certificates verified"

    criterion(capsys, 3, "weight-24 pentagon, extremal forms and implications", check)


def test_criterion_4_poincare_lower_bound(capsys):
    def check():
        count = 0
        with working_precision(256):
            for k in range(16, 89, 4):
                limit = math.floor((k - 1) ** 2 / (16 * math.pi**2))
                for n in range(1, limit + 1):
                    c = certify_sign(k, n)
                    assert c.verdict == "positive", f"k={k}, n={n}: {c.verdict}"
                    count += 1
        return f"{count} coefficients certified positive at 256 bits"

    criterion(capsys, 4, "b(n) > 0 for n <= floor((k-1)^2/16pi^2), k = 16..88", check)


def test_criterion_5_delta_oracle(capsys):
    def check():
        tau = delta_qexp(21)
        worst = Fraction(0)
        with working_precision(256):
            for n in range(1, 21):
                C = 64
                while True:
                    b1 = poincare_coeff(12, 1, c_max=C)
                    bn = poincare_coeff(12, n, c_max=C)
                    r = bn.interval / b1.interval
                    err = max(abs(_to_fraction(r.lo) - tau[n]), abs(_to_fraction(r.hi) - tau[n]))
                    if err < Fraction(1, 10**6) or C >= 4096:
                        break
                    C *= 2
                assert err < Fraction(1, 10**6), f"n={n}: error {float(err):.3g} at c_max={C}"
                worst = max(worst, err)
        return f"max |b(n)/b(1) - tau(n)| <= {float(worst):.2e} over n <= 20"

    criterion(capsys, 5, "weight-12 Poincare series proportional to Delta", check)


@st.composite
def tail_inputs(draw):
    alpha = Fraction(draw(st.integers(1, 40)), 4)
    beta = -Fraction(draw(st.integers(1, 40)), 8)
    s0 = math.floor(alpha / -beta) + 1
    return draw(st.integers(s0, s0 + 40)), alpha, beta


def test_criterion_6_bound_evaluators(capsys):
    def check():
        import mpmath

        seen = []

        @settings(max_examples=100, database=None)
        @given(tail_inputs())
        def tail_property(inp):
            s, alpha, beta = inp
            with mpmath.workdps(30):
                a = mpmath.mpf(alpha.numerator) / alpha.denominator
                b = mpmath.mpf(beta.numerator) / beta.denominator
                partial = mpmath.fsum(mpmath.mpf(n) ** a * mpmath.exp(n * b) for n in range(s, s + 10**4))
                hi = _to_fraction(tail_bound(s, alpha, beta).hi)
                assert mpmath.mpf(hi.numerator) / hi.denominator >= partial, inp
            seen.append(inp)

        tail_property()
        assert len(seen) >= 100, f"only {len(seen)} tail inputs"

        weil = 0
        for c in range(1, 201):
            d = divisor_count(c)
            for m in range(1, 51):
                for n in range(1, 51):
                    bound = d * Interval.exact(gcd3(m, n, c) * c).sqrt()
                    assert abs(kloosterman(m, n, c)).hi <= bound.hi, f"Weil fails at {(m, n, c)}"
                    weil += 1

        checked = 0
        for k, cap in ((12, Fraction(8190)), (16, Fraction(174080, 9))):
            basis = miller_basis(k, 201)
            forms = [basis.combination([eisenstein_factor(k)])]
            forms += [basis.combination([a]) for a in (Fraction(0), cap / 4, cap / 2, cap)]
            for f in forms:
                assert all(f[n] >= 0 for n in range(201))
                for n in range(1, 201):
                    assert f[n] <= _to_fraction(theorem3_bound(k, n).hi), f"k={k}, n={n}"
                    checked += 1

        # weight-12 constant 8096 from the polytope: max a(1) on S is 8190
        b12 = miller_basis(12, 172)
        ineq = inequalities(b12, 171)
        prem = list(ineq.values())
        assert implies(prem, LinearInequality(0, Fraction(8190), (Fraction(-1),))).holds
        assert not implies(prem, LinearInequality(0, Fraction(8189), (Fraction(-1),))).holds
        d1 = Fraction(8190) - eisenstein_factor(12)
        assert d1 <= 8096 and coefficient_caps(12, b12, 2) == [d1]
        assert theorem3_bound(12, 1).contains(eisenstein_factor(12) * sigma(11, 1) + 8096)

        rows = [thm54_threshold(k) for k in (92, 96, 100)]
        Us = [theorem1_bounds(k)[1] for k in (92, 96, 100)]
        assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(rows, rows[1:])) and Us == sorted(Us)
        return f"100 tail inputs, {weil} Weil triples, {checked} coefficient bounds, d1 <= {float(d1):.2f}"

    criterion(capsys, 6, "bound evaluator properties", check)


def test_criterion_7_oracle_equivalence(capsys, runs):
    def check():
        decisions = 0
        for k in TABLE_WEIGHTS:
            run = runs[k]
            if run.basis.ell > 2:
                continue
            ineq = inequalities(run.basis, run.Bk)
            for d in run.a.decisions:
                prem = [ineq[n] for n in d.premise_indices]
                t = ineq[d.target]
                assert d.result.verify(prem, t), f"k={k}, target {d.target}: proof does not verify"
                assert fm_implies(prem, t) == d.result.holds, f"k={k}, target {d.target}: FM disagrees"
                if run.basis.ell == 2:
                    assert vertex_implies(prem, t) == d.result.holds, f"k={k}, target {d.target}: vertices disagree"
                decisions += 1
        return f"{decisions} decisions agree and re-verify"

    criterion(capsys, 7, "LP decisions agree with Fourier-Motzkin and vertex oracles (ell <= 2)", check)

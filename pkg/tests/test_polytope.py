import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nonneg_sturm.pipeline import TABLE_WEIGHTS, prepare, run_weight
from nonneg_sturm.polytope import (
    FarkasCertificate,
    LinearInequality,
    WitnessPoint,
    compute_A,
    find_witness,
    fm_implies,
    implies,
    inequalities,
    inequality_for,
    polytope_summary,
    vertex_implies,
    verify_a_document,
)
from nonneg_sturm.qseries import PrecisionError, miller_basis
from nonneg_sturm.simplex import maximize

F = Fraction


@pytest.fixture(scope="module")
def b24():
    return miller_basis(24, 201)


@pytest.fixture(scope="module")
def ineq24(b24):
    return inequalities(b24, 71)


def test_inequality_for_examples(b24):
    assert inequality_for(b24, 3) == LinearInequality(3, F(52416000), (F(195660), F(-48)))
    assert inequality_for(b24, 6) == LinearInequality(6, F(437824977408000), (F(-982499328), F(143820)))
    assert inequality_for(b24, 1) == LinearInequality(1, F(0), (F(1), F(0)))
    with pytest.raises(PrecisionError):
        inequality_for(b24, 201)


def test_homogeneous_part(b24):
    h = inequality_for(b24, 6).homogeneous()
    assert h.constant == 0 and h.coeffs == inequality_for(b24, 6).coeffs


def test_pentagon_excludes_line_4(ineq24):
    prem = [ineq24[n] for n in (1, 2, 3, 5, 6)]
    res = implies(prem, ineq24[4])
    assert res.holds and not res.vacuous and res.verify(prem, ineq24[4])


def test_first_five_do_not_force_sixth(ineq24):
    prem = [ineq24[n] for n in range(1, 6)]
    res = implies(prem, ineq24[6])
    assert not res.holds and res.verify(prem, ineq24[6])
    # the displayed form just past the a(6) = 0 edge
    assert WitnessPoint((F(445624), F(1))).verify(prem, ineq24[6])


def test_edge_form_for_fifth_coefficient(ineq24):
    prem = [ineq24[n] for n in (1, 2, 3, 4, 6)]
    res = implies(prem, ineq24[5])
    assert not res.holds and res.verify(prem, ineq24[5])
    assert WitnessPoint((F(434170), F(1728600000))).verify(prem, ineq24[5])


def test_premise_containing_target(ineq24):
    for n in (2, 7, 40):
        prem = [ineq24[1], ineq24[n]]
        res = implies(prem, ineq24[n])
        assert res.holds and res.verify(prem, ineq24[n])


def test_vacuous_implication():
    p = [LinearInequality(1, F(-1), (F(-1),))]  # -1 - a >= 0 with a >= 0 is empty
    t = LinearInequality(2, F(-5), (F(0),))
    res = implies(p, t)
    assert res.holds and res.vacuous and res.certificate.kind == "infeasible"
    assert res.verify(p, t)


def test_unbounded_gives_witness():
    p = [LinearInequality(1, F(0), (F(1), F(0)))]
    t = LinearInequality(2, F(10), (F(-1), F(0)))
    res = implies(p, t)
    assert not res.holds and res.verify(p, t)


def test_free_variables_certificate():
    p = [LinearInequality(1, F(0), (F(1),)), LinearInequality(2, F(3), (F(-1),))]
    t = LinearInequality(3, F(5), (F(-1),))
    res = implies(p, t, nonnegative=False)
    assert res.holds and res.certificate.verify(p, t)
    assert not implies(p[1:], LinearInequality(3, F(0), (F(1),)), nonnegative=False).holds


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        implies([LinearInequality(1, F(0), (F(1),))], LinearInequality(2, F(0), (F(1), F(1))))


@pytest.mark.parametrize("k, A", [(12, 2), (24, 6), (88, 59)])
def test_compute_A(k, A):
    run = run_weight(k)
    assert run.a.A == A
    w = run.a.witness
    f = run.basis.combination(w.values)
    assert all(f[n] >= 0 for n in range(A)) and f[A] < 0


def test_weight_12_witness():
    run = run_weight(12)
    assert run.a.witness.values == (F(8191),)
    f = run.a.witness_expansion
    assert (f[0], f[1], f[2]) == (1, 8191, -24)


def test_compute_A_precision():
    with pytest.raises(PrecisionError):
        compute_A(12, miller_basis(12, 100), 171)


def test_find_witness_none_when_implied(b24):
    assert find_witness(b24, 4, 71) is None


@pytest.mark.parametrize("k, active", [(12, (1, 2)), (16, (1, 3)), (24, (1, 2, 3, 5, 6))])
def test_polytope_summary(k, active):
    run = prepare(k)
    s = polytope_summary(k, run.basis, run.Bk)
    assert s.active == active and not s.touches_horizon
    if k == 24:
        assert len(s.vertices) == 5
        assert (F(0), F(0)) in s.vertices and (F(0), F(1092000)) in s.vertices
    doc = json.loads(json.dumps(s.to_json()))
    assert doc["active_set"] == list(active)


def test_weight_12_interval():
    b = miller_basis(12, 172)
    ineq = inequalities(b, 171)
    assert ineq[2] == LinearInequality(2, F(196560), (F(-24),))  # a(1) <= 8190


PENTAGON_FORMS = [
    ((-1, 1), 1),
    ((1, -1), 2),
    ((1, 1096077), 3),
    ((434170, 1728600000), 5),
    ((445624, 1), 6),
]


@pytest.mark.parametrize("a, neg", PENTAGON_FORMS)
def test_extremal_weight_24_forms(b24, a, neg):
    f = b24.combination([F(x) for x in a])
    negatives = [n for n in range(201) if f[n] < 0]
    assert negatives == [neg]


@pytest.mark.parametrize("k", [12, 16, 20, 24, 28, 32])
def test_oracle_equivalence(k):
    run = run_weight(k)
    ineq = inequalities(run.basis, run.Bk)
    for d in run.a.decisions:
        prem = [ineq[n] for n in d.premise_indices]
        t = ineq[d.target]
        assert d.result.verify(prem, t)
        assert fm_implies(prem, t) == d.result.holds
        if run.basis.ell == 2:
            assert vertex_implies(prem, t) == d.result.holds


@st.composite
def planar_systems(draw):
    rows = draw(st.lists(st.tuples(st.integers(-20, 20), st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=5))
    t = draw(st.tuples(st.integers(-20, 20), st.integers(-6, 6), st.integers(-6, 6)))
    prem = [LinearInequality(i, F(c), (F(x), F(y))) for i, (c, x, y) in enumerate(rows)]
    return prem, LinearInequality(99, F(t[0]), (F(t[1]), F(t[2])))


@settings(max_examples=200)
@given(planar_systems(), st.booleans())
def test_lp_agrees_with_oracles_on_random_systems(system, nonneg):
    prem, t = system
    res = implies(prem, t, nonneg)
    assert res.verify(prem, t, nonneg)
    assert fm_implies(prem, t, nonneg) == res.holds
    if nonneg:  # the vertex oracle needs a pointed region
        assert vertex_implies(prem, t) == res.holds


def _random_points(ineq, ell, rng, count):
    """LP vertices for random objectives and averages of them: points of S."""
    rows = [[-c for c in p.coeffs] for p in ineq.values()]
    rhs = [p.constant for p in ineq.values()]
    verts = []
    for _ in range(count):
        c = [F(rng.randint(-50, 50)) for _ in range(ell)]
        res = maximize(c, rows, rhs)
        assert res.status == "optimal"
        verts.append(res.x)
    pts = list(verts)
    for _ in range(count):
        ws = [F(rng.randint(1, 9)) for _ in verts]
        tot = sum(ws)
        pts.append([sum(w * v[m] for w, v in zip(ws, verts)) / tot for m in range(ell)])
    return pts


@pytest.mark.parametrize("k", TABLE_WEIGHTS)
def test_points_of_S_give_nonnegative_forms(k):
    run = prepare(k)
    B = run.Bk
    basis = miller_basis(k, B + 51)
    ineq = inequalities(basis, B)
    if basis.ell == 2:
        pts = polytope_summary(k, basis, B).vertices
    else:
        pts = _random_points(ineq, basis.ell, random.Random(k), 4)
    for p in pts:
        f = basis.combination(list(p))
        assert all(f[n] >= 0 for n in range(B + 1))
        assert all(f[n] > 0 for n in range(B + 1, B + 51))


def test_a_document_round_trip_and_tamper():
    run = run_weight(24)
    doc = json.loads(json.dumps(run.a.to_json()))
    assert verify_a_document(doc, run.basis) == []
    bad = json.loads(json.dumps(doc))
    bad["certificates"][0]["multipliers"][0] = "0"
    bad["certificates"][0]["multipliers"] = ["0"] * len(bad["certificates"][0]["multipliers"])
    assert verify_a_document(bad, run.basis)
    bad = json.loads(json.dumps(doc))
    bad["witness"]["values"] = ["0", "0"]
    assert verify_a_document(bad, run.basis)
    bad = json.loads(json.dumps(doc))
    del bad["certificates"][-1]
    assert verify_a_document(bad, run.basis)


def test_certificate_json_round_trip(ineq24):
    prem = [ineq24[n] for n in (1, 2, 3, 5, 6)]
    cert = implies(prem, ineq24[30]).certificate
    back = FarkasCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert back == cert and back.verify(prem, ineq24[30])
    assert LinearInequality.from_json(ineq24[30].to_json()) == ineq24[30]

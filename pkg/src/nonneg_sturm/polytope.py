"""Exact linear-inequality implication over the coefficients a(1..ell).

A normalised form ``f = F_{k,0} + sum a(m) F_{k,m}`` has q^n-coefficient
``c_0(n) + sum_m a(m) c_m(n)``; each index n therefore gives a half-space in
a-space.  This module decides whether a set of those half-spaces forces
another one (with a Farkas certificate) or not (with a rational witness
point), and uses that to find A(k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import fraction_from_str, fraction_to_str
from .qseries import CanonicalBasis, PrecisionError, QExpansion
from .simplex import maximize

__all__ = [
    "LinearInequality",
    "FarkasCertificate",
    "WitnessPoint",
    "Implication",
    "AResult",
    "PolytopeSummary",
    "inequality_for",
    "inequalities",
    "implies",
    "compute_A",
    "find_witness",
    "polytope_summary",
    "vertices_2d",
    "fm_implies",
    "vertex_implies",
    "verify_a_document",
]


@dataclass(frozen=True)
class LinearInequality:
    """``constant + sum coeffs[m-1] * a(m) >= 0``."""

    n: int
    constant: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def value(self, a: Sequence) -> Fraction:
        return self.constant + sum(c * x for c, x in zip(self.coeffs, a))

    def homogeneous(self) -> "LinearInequality":
        return LinearInequality(self.n, Fraction(0), self.coeffs)

    def to_json(self) -> dict:
        return {"n": self.n, "constant": fraction_to_str(self.constant), "coeffs": [fraction_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "LinearInequality":
        return cls(doc["n"], fraction_from_str(doc["constant"]), tuple(fraction_from_str(c) for c in doc["coeffs"]))

    def __str__(self):
        terms = " ".join(f"{'+' if c >= 0 else '-'} {abs(c)}*a({m})" for m, c in enumerate(self.coeffs, 1))
        return f"[n={self.n}] {self.constant} {terms} >= 0"


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonnegative multipliers proving ``target`` from ``premises``.

    ``kind == "implication"``: target - sum lambda_i p_i is a nonnegative
    combination of the bounds a(m) >= 0 plus a nonnegative constant.
    ``kind == "infeasible"``: sum lambda_i p_i has only nonpositive variable
    coefficients and a negative constant, so the premises are contradictory.
    """

    multipliers: tuple[Fraction, ...]
    kind: str = "implication"
    nonnegative: bool = True

    def verify(self, premises: Sequence[LinearInequality], target: LinearInequality) -> bool:
        lam = self.multipliers
        if len(lam) != len(premises) or any(x < 0 for x in lam):
            return False
        dim = target.dim
        comb = [sum(l * p.coeffs[m] for l, p in zip(lam, premises) if l) for m in range(dim)]
        const = sum(l * p.constant for l, p in zip(lam, premises) if l)
        if self.kind == "infeasible":
            if self.nonnegative:
                ok = all(c <= 0 for c in comb)
            else:
                ok = all(c == 0 for c in comb)
            return ok and const < 0
        residual = [t - c for t, c in zip(target.coeffs, comb)]
        if self.nonnegative:
            ok = all(r >= 0 for r in residual)
        else:
            ok = all(r == 0 for r in residual)
        return ok and target.constant - const >= 0

    def bound_multipliers(self, premises, target) -> list[Fraction]:
        comb = [sum(l * p.coeffs[m] for l, p in zip(self.multipliers, premises) if l) for m in range(target.dim)]
        return [t - c for t, c in zip(target.coeffs, comb)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "nonnegative_bounds": self.nonnegative,
            "multipliers": [fraction_to_str(x) for x in self.multipliers],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FarkasCertificate":
        return cls(tuple(fraction_from_str(x) for x in doc["multipliers"]), doc["kind"], doc["nonnegative_bounds"])


@dataclass(frozen=True)
class WitnessPoint:
    """Rational a(1..ell) meeting every premise and strictly violating a target."""

    values: tuple[Fraction, ...]

    def verify(self, premises: Sequence[LinearInequality], target: LinearInequality, nonnegative: bool = True) -> bool:
        if nonnegative and any(v < 0 for v in self.values):
            return False
        return all(p.value(self.values) >= 0 for p in premises) and target.value(self.values) < 0

    def to_json(self) -> dict:
        return {"values": [fraction_to_str(v) for v in self.values]}

    @classmethod
    def from_json(cls, doc: dict) -> "WitnessPoint":
        return cls(tuple(fraction_from_str(v) for v in doc["values"]))


@dataclass(frozen=True)
class Implication:
    holds: bool
    certificate: FarkasCertificate | None = None
    witness: WitnessPoint | None = None
    vacuous: bool = False

    def verify(self, premises, target, nonnegative: bool = True) -> bool:
        if self.holds:
            return self.certificate is not None and self.certificate.verify(premises, target)
        return self.witness is not None and self.witness.verify(premises, target, nonnegative)


# ---------------------------------------------------------------------------


def inequality_for(basis: CanonicalBasis, n: int) -> LinearInequality:
    """The half-space 'coefficient of q^n is nonnegative'."""
    if n >= basis.precision or n < 0:
        raise PrecisionError(f"index {n} outside basis precision {basis.precision}")
    return LinearInequality(
        n,
        Fraction(basis.forms[0][n]),
        tuple(Fraction(basis.forms[m][n]) for m in range(1, basis.ell + 1)),
    )


def inequalities(basis: CanonicalBasis, stop: int) -> dict[int, LinearInequality]:
    return {n: inequality_for(basis, n) for n in range(1, stop + 1)}


def _minimize(premises: Sequence[LinearInequality], target: LinearInequality, nonnegative: bool):
    """LP min of target over the premise region, in the simplex's max form."""
    dim = target.dim
    if nonnegative:
        A = [[-c for c in p.coeffs] for p in premises]
        c = [-x for x in target.coeffs]
    else:
        A = [[-c for c in p.coeffs] + list(p.coeffs) for p in premises]
        c = [-x for x in target.coeffs] + list(target.coeffs)
    b = [p.constant for p in premises]
    res = maximize(c, A, b)

    def point(x):
        if x is None:
            return None
        return list(x) if nonnegative else [x[i] - x[dim + i] for i in range(dim)]

    ray = point(res.ray)
    return res, point(res.x), ray


def implies(
    premises: Sequence[LinearInequality],
    target: LinearInequality,
    nonnegative: bool = True,
) -> Implication:
    """Decide whether the premises (plus a(m) >= 0 when ``nonnegative``) force the target."""
    premises = list(premises)
    for p in premises:
        if p.dim != target.dim:
            raise ValueError("inconsistent dimension")
    res, x, ray = _minimize(premises, target, nonnegative)
    if res.status == "infeasible":
        cert = FarkasCertificate(tuple(res.y), "infeasible", nonnegative)
        return Implication(True, cert, vacuous=True)
    if res.status == "unbounded":
        slope = sum(c * r for c, r in zip(target.coeffs, ray))
        t0 = target.value(x)
        step = (max(t0, 0) + 1) / -slope
        w = tuple(xi + step * ri for xi, ri in zip(x, ray))
        return Implication(False, witness=WitnessPoint(w))
    minimum = target.constant - res.value
    if minimum >= 0:
        return Implication(True, FarkasCertificate(tuple(res.y), "implication", nonnegative))
    return Implication(False, witness=WitnessPoint(tuple(x)))


# ---------------------------------------------------------------------------
# A(k)


@dataclass
class Decision:
    premise_indices: tuple[int, ...]
    target: int
    result: Implication
    via_box: bool = False


@dataclass
class AResult:
    weight: int
    A: int
    witness: WitnessPoint
    horizon: int
    decisions: list[Decision] = field(default_factory=list)
    witness_expansion: QExpansion | None = None

    def proof(self) -> tuple[list[Decision], list[Decision]]:
        """YES decisions at N = A, and the refuting decision for each smaller N."""
        final = [d for d in self.decisions if len(d.premise_indices) == self.A]
        refuted = [d for d in self.decisions if len(d.premise_indices) < self.A and not d.result.holds]
        return final, refuted

    def to_json(self) -> dict:
        final, refuted = self.proof()
        return {
            "weight": self.weight,
            "A": self.A,
            "horizon": self.horizon,
            "witness": self.witness.to_json(),
            "certificates": [{"target": d.target, **d.result.certificate.to_json()} for d in final],
            "refutations": [
                {"premises": len(d.premise_indices), "target": d.target, **d.result.witness.to_json()}
                for d in refuted
            ],
        }


def verify_a_document(doc: dict, basis: CanonicalBasis) -> list[str]:
    """Re-check a serialized A(k) result against a basis; returns the failures found."""
    problems = []
    A, horizon = doc["A"], doc["horizon"]
    ineq = inequalities(basis, horizon)
    premises = [ineq[n] for n in range(1, A + 1)]
    targets = {c["target"] for c in doc["certificates"]}
    if targets != set(range(A + 1, horizon + 1)):
        problems.append("certificates do not cover every target above A")
    for c in doc["certificates"]:
        if not FarkasCertificate.from_json(c).verify(premises, ineq[c["target"]]):
            problems.append(f"certificate for target {c['target']} fails")
    covered = set()
    for r in doc["refutations"]:
        N = r["premises"]
        w = WitnessPoint.from_json(r)
        if not w.verify([ineq[n] for n in range(1, N + 1)], ineq[r["target"]]):
            problems.append(f"refutation of N={N} fails")
        covered.add(N)
    missing = set(range(max(basis.ell, 1), A)) - covered
    if missing:
        problems.append(f"no refutation for N in {sorted(missing)}")
    w = WitnessPoint.from_json(doc["witness"])
    f = basis.combination(w.values)
    if not (all(f[n] >= 0 for n in range(A)) and f[A] < 0):
        problems.append("witness form does not first go negative at A")
    return problems


def _box(premises, dim):
    """Upper bounds U_m on a(m) over the premise region, each with a certificate."""
    out = []
    for m in range(dim):
        coeffs = [Fraction(0)] * dim
        coeffs[m] = Fraction(1)
        # maximize a(m): minimise -a(m)
        res, x, _ = _minimize(premises, LinearInequality(0, Fraction(0), tuple(-c for c in coeffs)), True)
        if res.status != "optimal":
            return None
        upper = res.value  # max a(m)
        tgt = LinearInequality(0, upper, tuple(-c for c in coeffs))
        out.append((upper, FarkasCertificate(tuple(res.y)), tgt))
    return out


def _box_implies(box, premises, target) -> Implication | None:
    lo = target.constant
    lam = [Fraction(0)] * len(premises)
    for m, c in enumerate(target.coeffs):
        if c < 0:
            upper, cert, _ = box[m]
            lo += c * upper
            for i, v in enumerate(cert.multipliers):
                if v:
                    lam[i] += -c * v
    if lo < 0:
        return None
    return Implication(True, FarkasCertificate(tuple(lam)))


def compute_A(k: int, basis: CanonicalBasis, Bk: int, certify: bool = True) -> AResult:
    """Least N whose first N inequalities force inequalities N+1..B(k), plus a witness."""
    if basis.precision <= Bk:
        raise PrecisionError(f"basis precision {basis.precision} must exceed B(k) = {Bk}")
    ell = basis.ell
    ineq = inequalities(basis, Bk)
    decisions: list[Decision] = []
    answer = None
    for N in range(max(ell, 1), Bk + 1):
        premises = [ineq[n] for n in range(1, N + 1)]
        idx = tuple(range(1, N + 1))
        box = None
        passed = True
        for n in range(N + 1, Bk + 1):
            target = ineq[n]
            res = None
            via_box = False
            if box is not None:
                res = _box_implies(box, premises, target)
                via_box = res is not None
            if res is None:
                res = implies(premises, target)
            if certify and not res.verify(premises, target):
                raise ArithmeticError(f"certificate failed to verify (k={k}, N={N}, n={n})")  # pragma: no cover
            decisions.append(Decision(idx, n, res, via_box))
            if not res.holds:
                passed = False
                break
            if box is None:
                box = _box(premises, ell) or None
        if passed:
            answer = N
            break
    if answer is None:  # pragma: no cover - B(k) itself always passes
        raise ArithmeticError("no N <= B(k) passed")
    witness = find_witness(basis, answer, Bk)
    if witness is None:
        raise ArithmeticError(f"no witness for N = {answer}")  # pragma: no cover
    f = basis.combination(witness.values).truncate(Bk + 1)
    return AResult(k, answer, witness, Bk, decisions, f)


def _segment_candidates(p, q, lam0):
    """Points p + lam (q - p), lam in (lam0, 1], from just past lam0 outward."""
    d = [qi - pi for pi, qi in zip(p, q)]
    for j in range(48, -1, -1):
        lam = lam0 + (1 - lam0) / Fraction(2) ** j
        yield tuple(pi + lam * di for pi, di in zip(p, d))


def find_witness(basis: CanonicalBasis, N: int, horizon: int) -> WitnessPoint | None:
    """Rational a(1..ell) whose form is >= 0 below q^N and negative at q^N.

    Prefers a point that is nonnegative at every other index up to
    ``horizon``; returns None when the first N-1 inequalities force the N-th.
    """
    ineq = inequalities(basis, horizon)
    target = ineq[N]
    nonneg = N > basis.ell
    others = [ineq[n] for n in range(1, horizon + 1) if n != N]
    res = implies(others, target, nonneg)
    premises = others
    if res.holds:
        premises = [ineq[n] for n in range(1, N)]
        res = implies(premises, target, nonneg)
        if res.holds:
            return None
    bad = res.witness.values
    # a point of the region on the satisfied side of the target
    full = [ineq[n] for n in range(1, horizon + 1)]
    good_res, good, _ = _minimize(full, target, True)
    if good_res.status != "optimal":
        return res.witness
    tp, tq = target.value(good), target.value(bad)
    lam0 = tp / (tp - tq)
    fallback = None
    for cand in _segment_candidates(good, bad, lam0):
        rounded = tuple(Fraction(round(c)) for c in cand)
        w = WitnessPoint(rounded)
        if w.verify(premises, target, nonneg):
            return w
        if fallback is None and WitnessPoint(cand).verify(premises, target, nonneg):
            fallback = WitnessPoint(cand)
    return fallback or res.witness


# ---------------------------------------------------------------------------
# geometry of S


@dataclass
class PolytopeSummary:
    weight: int
    horizon: int
    active: tuple[int, ...]
    vertices: tuple[tuple[Fraction, ...], ...] | None
    touches_horizon: bool

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "horizon": self.horizon,
            "active_set": list(self.active),
            "touches_horizon": self.touches_horizon,
            "vertices": None if self.vertices is None else [[fraction_to_str(x) for x in v] for v in self.vertices],
        }


def polytope_summary(k: int, basis: CanonicalBasis, Bk: int) -> PolytopeSummary:
    """Irredundant constraint indices among 1..B(k), and the vertices when ell = 2."""
    if basis.ell < 1:
        raise ValueError("no free coefficients for ell = 0")
    ineq = inequalities(basis, Bk)
    kept = list(range(1, Bk + 1))
    # drop constraints one at a time; a constraint implied by the survivors is redundant
    for n in range(Bk, 0, -1):
        others = [ineq[m] for m in kept if m != n]
        if implies(others, ineq[n], nonnegative=False).holds:
            kept.remove(n)
    verts = None
    if basis.ell == 2:
        verts = tuple(vertices_2d([ineq[n] for n in kept]))
    return PolytopeSummary(k, Bk, tuple(kept), verts, Bk in kept)


def vertices_2d(constraints: Sequence[LinearInequality]) -> list[tuple[Fraction, Fraction]]:
    """Vertices of the planar region cut out by the constraints (pairwise line intersections)."""
    pts = set()
    for p, q in itertools.combinations(constraints, 2):
        (a1, b1), (a2, b2) = p.coeffs, q.coeffs
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        # a1 x + b1 y = -c1, a2 x + b2 y = -c2
        x = (-p.constant * b2 + q.constant * b1) / det
        y = (-a1 * q.constant + a2 * p.constant) / det
        if all(c.value((x, y)) >= 0 for c in constraints):
            pts.add((x, y))
    return sorted(pts)


# ---------------------------------------------------------------------------
# independent oracles


def _bounds_rows(dim: int) -> list[LinearInequality]:
    rows = []
    for m in range(dim):
        coeffs = [Fraction(0)] * dim
        coeffs[m] = Fraction(1)
        rows.append(LinearInequality(-1, Fraction(0), tuple(coeffs)))
    return rows


def _primitive(coeffs, const):
    # scale by a positive rational so the row is a primitive integer vector
    from math import gcd, lcm

    vals = list(coeffs) + [const]
    den = 1
    for v in vals:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return tuple(v // g for v in ints[:-1]), ints[-1] // g


def fm_implies(premises: Sequence[LinearInequality], target: LinearInequality, nonnegative: bool = True) -> bool:
    """Fourier-Motzkin decision: is {premises, target < 0} infeasible?"""
    dim = target.dim
    rows = list(premises) + (_bounds_rows(dim) if nonnegative else [])
    # (coeffs, const, strict): coeffs.a + const >= 0, or > 0 when strict
    system = {(*_primitive(r.coeffs, r.constant), False) for r in rows}
    neg = _primitive([-c for c in target.coeffs], -target.constant)
    system.add((neg[0], neg[1], True))
    for var in range(dim):
        pos = [r for r in system if r[0][var] > 0]
        negs = [r for r in system if r[0][var] < 0]
        zero = {r for r in system if r[0][var] == 0}
        for (pc, pk, ps), (nc, nk, ns) in itertools.product(pos, negs):
            fp, fn = -nc[var], pc[var]
            coeffs = [fp * x + fn * y for x, y in zip(pc, nc)]
            const = fp * pk + fn * nk
            coeffs, const = _primitive(coeffs, const)
            zero.add((coeffs, const, ps or ns))
        system = zero
        # early contradiction check on variable-free rows
        for coeffs, const, strict in system:
            if all(c == 0 for c in coeffs) and (const < 0 or (strict and const <= 0)):
                return True
    return False


def vertex_implies(premises: Sequence[LinearInequality], target: LinearInequality, nonnegative: bool = True) -> bool:
    """Planar oracle: check the target on every vertex and recession ray of the region."""
    if target.dim != 2:
        raise ValueError("vertex oracle only for ell = 2")
    rows = list(premises) + (_bounds_rows(2) if nonnegative else [])
    verts = vertices_2d(rows)
    if not verts:
        # a nonempty 2-D region with a vertex-free boundary cannot occur once
        # both coordinate bounds are present
        if nonnegative:
            return True  # empty region: vacuous
        raise ValueError("vertex oracle needs a pointed region")
    if any(target.value(v) < 0 for v in verts):
        return False
    # recession cone {d : homogeneous rows >= 0}; extreme rays lie on row boundaries
    cands = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))]
    for r in rows:
        a, b = r.coeffs
        cands += [(b, -a), (-b, a)]
    for d in cands:
        if d == (0, 0):
            continue
        if all(r.coeffs[0] * d[0] + r.coeffs[1] * d[1] >= 0 for r in rows):
            if target.coeffs[0] * d[0] + target.coeffs[1] * d[1] < 0:
                return False
    return True

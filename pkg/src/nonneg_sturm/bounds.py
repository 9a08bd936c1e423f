"""Rigorous enclosures of the explicit constants governing A(k).

All transcendental quantities are computed as :class:`~.interval.Interval`
objects; the certified upper bound of a quantity is its ``hi`` endpoint.
Integer thresholds are taken only when the enclosure pins the integer down,
otherwise the computation is repeated at twice the precision.

The numeric constants (11, 41.41, 7.288, 18.72, 1.806, 7316, 1.07e-10, 8096)
are transcribed as exact decimals and never tightened.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

from .errors import HypothesisViolated, NotFoundError, WeightError
from .exactnum import bernoulli, divisor_count, eisenstein_factor, sigma
from .interval import EnclosureTooWide, Interval, get_precision, ival, working_precision
from .qseries import CanonicalBasis

__all__ = [
    "BoundReport",
    "find_t",
    "coefficient_caps",
    "cusp_bound_constant",
    "c2_and_Bk",
    "theorem1_bounds",
    "tail_bound",
    "smallC_bound",
    "prop53_C_cap",
    "theorem3_bound",
    "thm54_threshold",
    "log_loglog",
    "with_retry",
    "JR_EXP_DEFAULT",
]

# Exponent in the e^{...} factor of the cusp-form coefficient bound.
JR_EXP_DEFAULT = "18.72"
MAX_PRECISION = 1 << 14

T = TypeVar("T")


def with_retry(fn: Callable[..., T]) -> Callable[..., T]:
    """Re-run ``fn`` at doubled precision while it raises EnclosureTooWide."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        bits = get_precision()
        while True:
            try:
                with working_precision(bits):
                    return fn(*args, **kwargs)
            except EnclosureTooWide:
                bits *= 2
                if bits > MAX_PRECISION:
                    raise

    return wrapper


def _check_weight(k: int, minimum: int = 12) -> None:
    if k % 4 or k < minimum:
        raise WeightError(f"weight must satisfy k = 0 mod 4 and k >= {minimum}, got {k}")


def log_loglog(k: int) -> Interval:
    """log k + log log k."""
    lk = Interval.exact(k).log()
    return lk + lk.log()


# ---------------------------------------------------------------------------
# small weights: t, coefficient caps, C_2, B(k)


def find_t(basis: CanonicalBasis, search_limit: int | None = None) -> int:
    """Least t with c_m(t) < 0 for every 1 <= m <= ell."""
    if search_limit is None:
        search_limit = basis.precision - 1
    if basis.precision <= search_limit:
        raise ValueError(f"basis precision {basis.precision} must exceed search limit {search_limit}")
    if basis.ell == 0:
        raise NotFoundError(f"weight {basis.weight} has no cusp forms, so no t exists")
    for t in range(basis.ell + 1, search_limit + 1):
        if all(basis.forms[m][t] < 0 for m in range(1, basis.ell + 1)):
            return t
    raise NotFoundError(f"no t <= {search_limit} for weight {basis.weight}")


def coefficient_caps(k: int, basis: CanonicalBasis, t: int) -> list[Fraction]:
    """Exact bounds on |c(m)|, 1 <= m <= ell, for the cusp part of a nonnegative form.

    With 0 <= a(m) <= -c_0(t)/c_m(t) and c(m) = a(m) - e(m), where e(m) is
    the Eisenstein coefficient, |c(m)| <= max(e(m), cap_m - e(m)).
    """
    ef = eisenstein_factor(k)
    caps = []
    for m in range(1, basis.ell + 1):
        e = ef * sigma(k - 1, m)
        cap = Fraction(-basis.forms[0][t], basis.forms[m][t])
        caps.append(max(e, cap - e))
    return caps


def cusp_bound_constant(coeff_bounds: Sequence, k: int, jr_exponent: str = JR_EXP_DEFAULT) -> Interval:
    """Enclosure of the multiplier of d(n) n^{(k-1)/2} in the cusp-form bound.

    ``coeff_bounds[m-1]`` bounds |c(m)|.  The absolute value of the weighted
    sum of the c(m) is bounded by the sum of |c(m)| e^{-7.288 m}.
    """
    bs = [abs(ival(b)) for b in coeff_bounds]
    if all(b.hi == 0 for b in bs):
        return Interval.exact(0)
    sq = Interval.exact(0)
    ex = Interval.exact(0)
    decay = Interval.exact("-7.288")
    for m, b in enumerate(bs, start=1):
        sq = sq + b * b / Interval.exact(m) ** (k - 1)
        ex = ex + b * (decay * m).exp()
    kk = Interval.exact(k)
    growth = Interval.exact(jr_exponent).exp() * Interval.exact("41.41") ** Fraction(k, 2)
    growth = growth / kk ** Fraction(k - 1, 2)
    return kk.log().sqrt() * (11 * sq.sqrt() + growth * ex)


@dataclass(frozen=True)
class BoundReport:
    """Certified constants for one weight; interval fields report ``hi`` as the bound."""

    weight: int
    t: int | None
    C2: Interval | None
    Bk: int | None
    L: int
    U: int
    thm3_constant: Interval
    C_cap: Interval | None
    y: Interval
    s: int
    precision_bits: int
    coeff_caps: tuple[Fraction, ...] = field(default=())

    def to_json(self) -> dict:
        def up(x):
            return None if x is None else {"upper_bound": x.upper_str(15), "lower_enclosure": x.lower_str(15)}

        return {
            "weight": self.weight,
            "t": self.t,
            "C2": up(self.C2),
            "B": self.Bk,
            "L": self.L,
            "U": self.U,
            "theorem3_constant": up(self.thm3_constant),
            "C_cap": up(self.C_cap),
            "y": up(self.y),
            "s": self.s,
            "working_precision_bits": self.precision_bits,
            "semantics": "decimal strings under 'upper_bound' are certified upper bounds",
        }


@with_retry
def _bk_from_c2(k: int, ell: int, t: int, c2: Interval) -> int:
    c2_up = Interval.exact(c2.hi)
    base = c2_up * Interval.exact(-bernoulli(k) / k)
    x = base ** Fraction(1, k // 2 - 1)
    return max(ell, t, x.floor() + 1)


def c2_and_Bk(k: int, basis: CanonicalBasis, t: int | None = None, jr_exponent: str = JR_EXP_DEFAULT) -> BoundReport:
    """C_2, B(k) and the other per-weight constants."""
    _check_weight(k)
    if basis.weight != k:
        raise ValueError("basis weight mismatch")
    if t is None:
        t = find_t(basis)
    caps = coefficient_caps(k, basis, t)
    c2 = cusp_bound_constant(caps, k, jr_exponent)
    bk = _bk_from_c2(k, basis.ell, t, c2)
    lb, ub = theorem1_bounds(k)
    ll = log_loglog(k)
    y = Interval.exact(k) / (2 * Interval.pi()) * ll
    s = _ceil_retry(lambda: Interval.exact(k * k) * log_loglog(k) ** 2)
    return BoundReport(
        weight=k,
        t=t,
        C2=c2,
        Bk=bk,
        L=lb,
        U=ub,
        thm3_constant=theorem3_constant(k),
        C_cap=prop53_C_cap(k) if k >= 64 else None,
        y=y,
        s=s,
        precision_bits=get_precision(),
        coeff_caps=tuple(caps),
    )


@with_retry
def _ceil_retry(fn: Callable[[], Interval]) -> int:
    return fn().ceil()


@with_retry
def _floor_retry(fn: Callable[[], Interval]) -> int:
    return fn().floor()


# ---------------------------------------------------------------------------
# the two ends of the main estimate


def theorem1_bounds(k: int) -> tuple[int, int]:
    """(L(k), U(k)) = (ceil((k-1)^2 / 16 pi^2), floor(k^4 (log k + log log k)^2 / 7316))."""
    _check_weight(k)
    lower = _ceil_retry(lambda: Interval.exact((k - 1) ** 2) / (16 * Interval.pi() ** 2))
    upper = _floor_retry(lambda: Interval.exact(k**4) * log_loglog(k) ** 2 / 7316)
    return lower, upper


def tail_bound(s: int, alpha, beta) -> Interval:
    """Upper enclosure of s^a e^{s b} / (1 - e^{a/s + b}), which dominates sum_{n>=s} n^a e^{n b}."""
    a, b = ival(alpha), ival(beta)
    if s < 1 or a.lo <= 0 or b.hi >= 0:
        raise HypothesisViolated("need s >= 1, alpha > 0, beta < 0")
    if not (b * s + a).hi < 0:
        raise HypothesisViolated(f"need s*beta < -alpha (s={s})")
    ss = Interval.exact(s)
    num = ss**a * (b * s).exp()
    den = 1 - (a / s + b).exp()
    return num / den


def smallC_bound(k: int, C, n: int) -> Interval:
    """12 (C + 1.5^k) sqrt(log k) d(n) n^{(k-1)/2}; valid for k >= 64."""
    if k < 64:
        raise WeightError(f"bound needs k >= 64, got {k}")
    kk = Interval.exact(k)
    inner = ival(C) + Interval.exact("1.5") ** k
    return 12 * inner * kk.log().sqrt() * divisor_count(n) * Interval.exact(n) ** Fraction(k - 1, 2)


def prop53_C_cap(k: int) -> Interval:
    """1.806 (k/2pi)^k (log k + log log k)^k, for k >= 64."""
    if k < 64:
        raise WeightError(f"threshold needs k >= 64, got {k}")
    return Interval.exact("1.806") * (Interval.exact(k) / (2 * Interval.pi())) ** k * log_loglog(k) ** k


def theorem3_constant(k: int) -> Interval:
    if k == 12:
        return Interval.exact(8096)
    if k < 16 or k % 4:
        raise WeightError(f"no coefficient bound for weight {k}")
    kk = Interval.exact(k)
    return Interval.exact("1.07e-10") * (kk / (2 * Interval.pi())) ** k * kk.log() ** Fraction(3 * k, 2)


def theorem3_bound(k: int, n: int) -> Interval:
    """Upper bound on a(n) for f = 1 + sum a(n) q^n in M_k with no negative coefficients."""
    if k != 12 and (k < 16 or k % 4):
        raise WeightError(f"no coefficient bound for weight {k}")
    eis = Interval.exact(eisenstein_factor(k) * sigma(k - 1, n))
    return eis + theorem3_constant(k) * divisor_count(n) * Interval.exact(n) ** Fraction(k - 1, 2)


def thm54_threshold(k: int) -> tuple[int, int]:
    """(ceil(k^2 (log k + log log k)^2), ceil(k^4 (log k + log log k)^2 / 7316)), k >= 92."""
    if k < 92:
        raise WeightError(f"threshold needs k >= 92, got {k}")
    hyp = _ceil_retry(lambda: Interval.exact(k * k) * log_loglog(k) ** 2)
    concl = _ceil_retry(lambda: Interval.exact(k**4) * log_loglog(k) ** 2 / 7316)
    return hyp, concl

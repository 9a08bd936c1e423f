"""Certified coefficients of the weight-k Poincare series P_1.

For k = 0 mod 4 the q^n coefficient is

    b(n) = n^{(k-1)/2} [ delta_{n,1} + 2 pi sum_{c>=1} K(1,n;c)/c J_{k-1}(4 pi sqrt(n)/c) ].

The c-sum is summed exactly (in interval arithmetic) up to ``c_max``; the rest
is bounded with |K(1,n;c)| <= d(c) sqrt(c) and |J_nu(z)| <= (z/2)^nu / nu!,
which leaves sum_{c > c_max} d(c) c^{-(k-1/2)} times an explicit factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpfr

from .bounds import _check_weight
from .errors import Undecided, WidthNotReached
from .exactnum import divisor_count, modinv
from .interval import Interval, ceil_exact, floor_exact, get_precision, ival, working_precision

__all__ = [
    "BesselEval",
    "PoincareCoeff",
    "kloosterman",
    "bessel_j",
    "poincare_coeff",
    "certify_sign",
    "sign_report",
    "first_sign_change",
    "tail_sum_bound",
]

DEFAULT_CMAX_CAP = 4096
MAX_BITS = 4096


# ---------------------------------------------------------------------------
# Kloosterman sums


@lru_cache(maxsize=512)
def _units(c: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    xs = tuple(x for x in range(c) if math.gcd(x, c) == 1) if c > 1 else (0,)
    inv = tuple(modinv(x, c) for x in xs) if c > 1 else (0,)
    return xs, inv


@lru_cache(maxsize=512)
def _cos_table(c: int, bits: int) -> tuple[list[int], list[int]]:
    """floor and ceil of 2^bits cos(2 pi r / c) for 0 <= r < c."""
    lo_tab, hi_tab = [0] * c, [0] * c
    with working_precision(bits + 16):
        scale = 1 << bits
        for r in range(c // 2 + 1):
            if r == 0:
                lo = hi = scale
            elif 4 * r == c:
                lo = hi = 0
            elif 2 * r == c:
                lo = hi = -scale
            else:
                v = (2 * Interval.pi() * r / c).cos() * scale
                lo, hi = floor_exact(v.lo), ceil_exact(v.hi)
            lo_tab[r] = lo_tab[(c - r) % c] = lo
            hi_tab[r] = hi_tab[(c - r) % c] = hi
    return lo_tab, hi_tab


def kloosterman(m: int, n: int, c: int) -> Interval:
    """Enclosure of K(m, n; c) = sum over units x mod c of cos(2 pi (m x + n x^{-1}) / c).

    Each cosine is replaced by the integer floor and ceiling of 2^P cos, so the
    two integer sums bracket 2^P K exactly.
    """
    if c < 1:
        raise ValueError("modulus must be positive")
    if c == 1:
        return Interval.exact(1)
    bits = get_precision() + c.bit_length()
    xs, inv = _units(c)
    lo_tab, hi_tab = _cos_table(c, bits)
    m, n = m % c, n % c
    rs = [(m * x + n * y) % c for x, y in zip(xs, inv)]
    lo = sum(map(lo_tab.__getitem__, rs))
    hi = sum(map(hi_tab.__getitem__, rs))
    return Interval.dyadic(lo, hi, bits)


# ---------------------------------------------------------------------------
# Bessel J


@dataclass(frozen=True)
class BesselEval:
    order: int
    argument: Interval
    value: Interval

    @property
    def value_lo(self):
        return self.value.lo

    @property
    def value_hi(self):
        return self.value.hi


def bessel_j(nu: int, x) -> BesselEval:
    """J_nu(x) for integer nu >= 1 and x > 0 from the ascending series.

    Terms alternate in sign and shrink in modulus once
    (x/2)^2 < (j+1)(nu+j+1); past that point the remainder has the sign of
    the next term and is no larger in modulus.  Guard bits absorb the
    cancellation between terms, which is at most about e^x.
    """
    if nu < 1 or int(nu) != nu:
        raise ValueError("order must be a positive integer")
    bits = get_precision()
    exact = x
    x = ival(x)
    if x.lo <= 0:
        raise ValueError("argument must be positive")
    guard = int(float(x.hi) * 1.4427) + 32
    with working_precision(bits + guard):
        # an exact argument is re-rounded with the guard bits, since its
        # rounding width is magnified by the same cancellation
        x = Interval(x.lo, x.hi) if isinstance(exact, Interval) else ival(exact)
        half = x / 2
        h2 = half * half
        term = half ** nu / Interval.exact(math.factorial(nu))
        total = term
        biggest = abs(term).hi
        j = 0
        while True:
            term = -(term * h2) / ((j + 1) * (nu + j + 1))
            j += 1
            mag = abs(term).hi
            biggest = max(biggest, mag)
            settled = h2.hi < (j + 1) * (nu + j + 1)
            scale = max(abs(total).lo, biggest * mpfr(2) ** -guard)
            if settled and mag <= scale * mpfr(2) ** -(bits + 8):
                break
            total = total + term
        value = total + Interval.hull(Interval.exact(0), term)
    return BesselEval(nu, x, value)


# ---------------------------------------------------------------------------
# coefficients


def tail_sum_bound(c_max: int, s: int) -> Interval:
    """Upper bound for sum_{c > c_max} d(c) c^{-(s - 1/2)}, s >= 3.

    Terms with c_max < c <= 4 c_max + 16 use the exact divisor count; beyond
    that d(c) <= 2 sqrt(c) reduces the rest to 2 sum c^{-(s-1)}, which is at
    most 2 (D^{-(s-1)} + D^{-(s-2)}/(s-2)) with D the first omitted c.
    """
    if s < 3:
        raise ValueError("exponent too small for a convergent tail")
    D = 4 * c_max + 17
    total = Interval.exact(0)
    expo = Interval.exact(2 * s - 1) / 2
    for c in range(c_max + 1, D):
        total = total + divisor_count(c) / Interval.exact(c) ** expo
    dd = Interval.exact(D)
    return total + 2 * (1 / dd ** (s - 1) + 1 / (dd ** (s - 2) * (s - 2)))


@dataclass(frozen=True)
class PoincareCoeff:
    """Certified enclosure of the q^n coefficient of P_1 in weight k."""

    k: int
    n: int
    lo: object
    hi: object
    c_max: int
    tail: Interval
    precision_bits: int

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def width(self):
        return self.interval.width

    @property
    def verdict(self) -> str:
        if self.lo > 0:
            return "positive"
        if self.hi < 0:
            return "negative"
        return "undecided"

    def to_row(self) -> dict:
        iv = self.interval
        return {
            "n": self.n,
            "lo": iv.lower_str(15),
            "hi": iv.upper_str(15),
            "c_max": self.c_max,
            "verdict": self.verdict,
        }


def _term(k: int, n: int, c: int) -> Interval:
    """K(1,n;c)/c J_{k-1}(4 pi sqrt(n)/c)."""
    K = kloosterman(1, n, c)
    if K.lo == 0 and K.hi == 0:
        return K
    # The series cancels terms of size up to about e^x, which magnifies the
    # width of the argument itself; build the argument with matching guard bits.
    guard = int(4 * math.pi * math.sqrt(n) / c * 1.4427) + 32
    with working_precision(get_precision() + guard):
        arg = 4 * Interval.pi() * Interval.exact(n).sqrt() / c
        J = bessel_j(k - 1, arg).value
    return K / c * J


def _build(k: int, n: int, c_max: int, partial: Interval, done: int) -> tuple[Interval, Interval, Interval]:
    sqrt_n = Interval.exact(n).sqrt()
    for c in range(done + 1, c_max + 1):
        partial = partial + _term(k, n, c)
    two_pi = 2 * Interval.pi()
    scale = sqrt_n ** (k - 1)
    # |K/c J| <= d(c) c^{-1/2} (2 pi sqrt n)^{k-1} / (k-1)! c^{-(k-1)}
    m_fac = (two_pi * sqrt_n) ** (k - 1) / Interval.exact(math.factorial(k - 1))
    tail = scale * two_pi * m_fac * tail_sum_bound(c_max, k)
    tail = Interval(mpfr(0), tail.hi)
    delta = Interval.exact(1 if n == 1 else 0)
    core = scale * (delta + two_pi * partial)
    value = core + Interval.hull(-tail, tail)
    return value, tail, partial


def _check_P1_weight(k: int) -> None:
    _check_weight(k)
    assert k % 4 == 0  # i^{-k} = 1


def poincare_coeff(
    k: int,
    n: int,
    target_width=None,
    c_max: int | None = None,
    cmax_cap: int = DEFAULT_CMAX_CAP,
) -> PoincareCoeff:
    """Enclosure of b(n).

    With ``c_max`` given the c-sum is cut there.  Otherwise c_max grows
    (doubling) until the width is at most ``target_width``; WidthNotReached is
    raised once c_max would pass ``cmax_cap``.
    """
    _check_P1_weight(k)
    if n < 1:
        raise ValueError("n must be positive")
    bits = get_precision()
    if c_max is not None:
        if c_max < 0:
            raise ValueError("c_max must be nonnegative")
        value, tail, _ = _build(k, n, c_max, Interval.exact(0), 0)
        return PoincareCoeff(k, n, value.lo, value.hi, c_max, tail, bits)
    if target_width is None:
        raise ValueError("give either c_max or target_width")
    goal = ival(target_width).lo
    C, done, partial = 1, 0, Interval.exact(0)
    while True:
        value, tail, partial = _build(k, n, C, partial, done)
        done = C
        if value.width <= goal:
            return PoincareCoeff(k, n, value.lo, value.hi, C, tail, bits)
        if 2 * C > cmax_cap:
            raise WidthNotReached(
                f"b({n}) in weight {k}: width {value.width} at c_max={C} above target {goal}",
                achieved_width=value.width,
            )
        C *= 2


def certify_sign(k: int, n: int, cmax_cap: int = DEFAULT_CMAX_CAP, max_bits: int = MAX_BITS) -> PoincareCoeff:
    """Smallest-effort enclosure of b(n) that excludes 0, or the last one tried."""
    _check_P1_weight(k)
    bits = get_precision()
    C = 1
    while True:
        with working_precision(bits):
            coef = poincare_coeff(k, n, c_max=C)
        if coef.verdict != "undecided":
            return coef
        tail_dominates = coef.tail.hi * 4 >= coef.width
        if tail_dominates and 2 * C <= cmax_cap:
            C *= 2
        elif not tail_dominates and 2 * bits <= max_bits:
            bits *= 2
        elif 2 * C <= cmax_cap:
            C *= 2
        else:
            return coef


def sign_report(k: int, n_limit: int, cmax_cap: int = DEFAULT_CMAX_CAP, max_bits: int = MAX_BITS) -> list[PoincareCoeff]:
    """Certified signs of b(1..n_limit), stopping at the first certified negative."""
    rows = []
    for n in range(1, n_limit + 1):
        coef = certify_sign(k, n, cmax_cap, max_bits)
        rows.append(coef)
        if coef.verdict == "negative":
            break
    return rows


def first_sign_change(k: int, n_limit: int, cmax_cap: int = DEFAULT_CMAX_CAP, max_bits: int = MAX_BITS) -> int | None:
    """Least n <= n_limit with b(n) certified negative; None if all are certified positive.

    Raises Undecided when some earlier coefficient could not be signed.
    """
    for coef in sign_report(k, n_limit, cmax_cap, max_bits):
        if coef.verdict == "undecided":
            raise Undecided(coef.n, coef.width)
        if coef.verdict == "negative":
            return coef.n
    return None

"""Outward-rounded interval arithmetic on top of MPFR (via gmpy2).

Every endpoint is produced by an MPFR call in the matching rounding direction
(lower endpoints toward -inf, upper toward +inf), so ``[lo, hi]`` always
contains the exact real.  An upper bound is simply ``Interval.hi``.

The working precision is a context variable (bits, default 128)::

    with working_precision(256):
        x = Interval.pi() * 2
"""

from __future__ import annotations

import contextlib
import contextvars
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import gmpy2
from gmpy2 import mpfr, mpz

__all__ = [
    "Interval",
    "EnclosureTooWide",
    "working_precision",
    "get_precision",
    "ival",
]

DEFAULT_PRECISION = 128

_precision = contextvars.ContextVar("nonneg_sturm_precision", default=DEFAULT_PRECISION)


class EnclosureTooWide(ArithmeticError):
    """An integer part was requested but the enclosure straddles an integer."""


@contextlib.contextmanager
def working_precision(bits: int):
    if bits < 16:
        raise ValueError("working precision must be at least 16 bits")
    token = _precision.set(bits)
    try:
        yield bits
    finally:
        _precision.reset(token)


def get_precision() -> int:
    return _precision.get()


@lru_cache(maxsize=None)
def _contexts(bits: int):
    kw = dict(precision=bits, emax=gmpy2.get_emax_max(), emin=gmpy2.get_emin_min())
    return gmpy2.context(round=gmpy2.RoundDown, **kw), gmpy2.context(round=gmpy2.RoundUp, **kw)


def _ctx():
    return _contexts(_precision.get())


def _exact_mpfr(n: int):
    n = mpz(n)
    return mpfr(n, max(n.bit_length(), 2))


def _fraction_bounds(x: Fraction):
    dn, up = _ctx()
    num, den = _exact_mpfr(x.numerator), _exact_mpfr(x.denominator)
    return dn.div(num, den), up.div(num, den)


class Interval:
    """Closed interval ``[lo, hi]`` with MPFR endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if isinstance(lo, Interval):
            lo = lo.lo
        if isinstance(hi, Interval):
            hi = hi.hi
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # constructors ----------------------------------------------------------

    @classmethod
    def exact(cls, x) -> "Interval":
        """Tightest enclosure of an exact int, Fraction or decimal string."""
        if isinstance(x, Interval):
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            dn, up = _ctx()
            m = _exact_mpfr(x)
            return cls(dn.add(m, 0), up.add(m, 0))
        if isinstance(x, Rational):
            return cls(*_fraction_bounds(Fraction(x)))
        if isinstance(x, float):
            return cls(mpfr(x, 53), mpfr(x, 53))
        if isinstance(x, type(mpfr(0))):
            dn, up = _ctx()
            return cls(dn.add(x, 0), up.add(x, 0))
        raise TypeError(f"cannot enclose {type(x).__name__}")

    @classmethod
    def dyadic(cls, lo: int, hi: int, shift: int) -> "Interval":
        """Enclosure of [lo / 2^shift, hi / 2^shift] for integers lo <= hi."""
        dn, up = _ctx()
        den = _exact_mpfr(1 << shift)
        return cls(dn.div(_exact_mpfr(lo), den), up.div(_exact_mpfr(hi), den))

    @classmethod
    def pi(cls) -> "Interval":
        dn, up = _ctx()
        return cls(dn.const_pi(), up.const_pi())

    @classmethod
    def e(cls) -> "Interval":
        dn, up = _ctx()
        one = mpfr(1)
        return cls(dn.exp(one), up.exp(one))

    @classmethod
    def hull(cls, *xs: "Interval") -> "Interval":
        xs = [ival(x) for x in xs]
        return cls(min(x.lo for x in xs), max(x.hi for x in xs))

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        o = ival(other)
        dn, up = _ctx()
        return Interval(dn.add(self.lo, o.lo), up.add(self.hi, o.hi))

    __radd__ = __add__

    def __neg__(self):
        # unary minus on an mpfr rounds in gmpy2's global context, so negate
        # through the directed contexts instead
        dn, up = _ctx()
        return Interval(dn.minus(self.hi), up.minus(self.lo))

    def __sub__(self, other):
        o = ival(other)
        dn, up = _ctx()
        return Interval(dn.sub(self.lo, o.hi), up.sub(self.hi, o.lo))

    def __rsub__(self, other):
        return ival(other) - self

    def __mul__(self, other):
        o = ival(other)
        dn, up = _ctx()
        if self.lo >= 0 and o.lo >= 0:
            return Interval(dn.mul(self.lo, o.lo), up.mul(self.hi, o.hi))
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return Interval(min(dn.mul(a, b) for a, b in pairs), max(up.mul(a, b) for a, b in pairs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ival(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"division by an interval containing zero: {o!r}")
        dn, up = _ctx()
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return Interval(min(dn.div(a, b) for a, b in pairs), max(up.div(a, b) for a, b in pairs))

    def __rtruediv__(self, other):
        return ival(other) / self

    def __pow__(self, e):
        if isinstance(e, int):
            return self._ipow(e)
        return (ival(e) * self.log()).exp()

    def _ipow(self, e: int) -> "Interval":
        if e < 0:
            return 1 / self._ipow(-e)
        if e == 0:
            return Interval.exact(1)
        dn, up = _ctx()
        if self.lo >= 0:
            return Interval(dn.pow(self.lo, e), up.pow(self.hi, e))
        if self.hi <= 0:
            r = (-self)._ipow(e)
            return r if e % 2 == 0 else -r
        m = max(up.minus(self.lo), self.hi)
        top = up.pow(m, e)
        if e % 2 == 0:
            return Interval(mpfr(0), top)
        return Interval(dn.minus(up.pow(up.minus(self.lo), e)), up.pow(self.hi, e))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        _, up = _ctx()
        return Interval(mpfr(0), max(up.minus(self.lo), self.hi))

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval reaching below zero")
        dn, up = _ctx()
        return Interval(dn.sqrt(self.lo), up.sqrt(self.hi))

    def exp(self) -> "Interval":
        dn, up = _ctx()
        return Interval(dn.exp(self.lo), up.exp(self.hi))

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise ValueError("log of an interval reaching zero or below")
        dn, up = _ctx()
        return Interval(dn.log(self.lo), up.log(self.hi))

    def cos(self) -> "Interval":
        dn, up = _ctx()
        pi = Interval.pi()
        if self.hi - self.lo >= 2 * pi.lo:
            return Interval(mpfr(-1), mpfr(1))
        # multiples k*pi that might fall inside [lo, hi]
        k_lo = floor_exact(dn.div(self.lo, pi.hi if self.lo >= 0 else pi.lo))
        k_hi = ceil_exact(up.div(self.hi, pi.lo if self.hi >= 0 else pi.hi))
        lo = min(dn.cos(self.lo), dn.cos(self.hi))
        hi = max(up.cos(self.lo), up.cos(self.hi))
        for k in range(k_lo, k_hi + 1):
            kp = pi * k
            if kp.hi < self.lo or kp.lo > self.hi:
                continue
            if k % 2 == 0:
                hi = mpfr(1)
            else:
                lo = mpfr(-1)
        return Interval(max(lo, mpfr(-1)), min(hi, mpfr(1)))

    # queries ---------------------------------------------------------------

    @property
    def width(self):
        _, up = _ctx()
        return up.sub(self.hi, self.lo)

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        o = ival(x)
        return self.lo <= o.lo and o.hi <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def floor(self) -> int:
        a, b = floor_exact(self.lo), floor_exact(self.hi)
        if a != b:
            raise EnclosureTooWide(f"floor undetermined: enclosure {self!r} straddles {b}")
        return a

    def ceil(self) -> int:
        a, b = ceil_exact(self.lo), ceil_exact(self.hi)
        if a != b:
            raise EnclosureTooWide(f"ceil undetermined: enclosure {self!r} straddles {a}")
        return a

    def upper_str(self, digits: int = 12) -> str:
        """Decimal string that is >= the upper endpoint."""
        return _decimal_round(self.hi, digits, up=True)

    def lower_str(self, digits: int = 12) -> str:
        return _decimal_round(self.lo, digits, up=False)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval[{self.lower_str(10)}, {self.upper_str(10)}]"


def _to_fraction(x) -> Fraction:
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


# gmpy2.floor / gmpy2.ceil round their argument to the global context's
# precision first, so integer parts are taken on the exact rational value.
def floor_exact(x) -> int:
    q = gmpy2.mpq(x)
    return int(q.numerator // q.denominator)


def ceil_exact(x) -> int:
    q = gmpy2.mpq(x)
    return int(-((-q.numerator) // q.denominator))


def _decimal_round(x, digits: int, up: bool) -> str:
    """Scientific notation with ``digits`` decimals, rounded toward +inf or -inf."""
    if x == 0:
        return "0"
    v = _to_fraction(x)
    av = abs(v)
    e10 = len(str(av.numerator)) - len(str(av.denominator))
    if Fraction(10) ** e10 > av:
        e10 -= 1
    scale = Fraction(10) ** (e10 - digits)
    m = v / scale
    mant = -((-m.numerator) // m.denominator) if up else m.numerator // m.denominator
    if abs(mant) >= 10 ** (digits + 1):
        # rounding carried into a new decade; mant is a multiple of 10 here
        mant //= 10
        e10 += 1
    sign = "-" if mant < 0 else ""
    ds = str(abs(mant))
    body = ds[0] + ("." + ds[1:] if digits else "")
    return f"{sign}{body}e{e10:+03d}"


def ival(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.exact(x)

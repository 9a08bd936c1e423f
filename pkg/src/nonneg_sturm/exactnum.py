"""Exact integer and rational primitives.

Everything here is exact: rationals are :class:`fractions.Fraction` (always in
lowest terms with a positive denominator) and naturals are plain ``int``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt

__all__ = [
    "bernoulli",
    "bernoulli_table",
    "sigma",
    "divisor_count",
    "divisors",
    "eisenstein_factor",
    "fraction_to_str",
    "fraction_from_str",
    "modinv",
    "gcd3",
]


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple[Fraction, ...]:
    # B_0..B_n from sum_{j=0}^{m} C(m+1, j) B_j = 0, with B_1 = -1/2.
    if n == 0:
        return (Fraction(1),)
    prev = _bernoulli_list(n - 1)
    m = n
    acc = sum(comb(m + 1, j) * prev[j] for j in range(m))
    return prev + (-acc / (m + 1),)


def bernoulli_table(n: int) -> tuple[Fraction, ...]:
    """Return ``(B_0, ..., B_n)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    # Build bottom-up so the memo never recurses deeply.
    for i in range(0, n + 1, 64):
        _bernoulli_list(i)
    return _bernoulli_list(n)


def bernoulli(k: int) -> Fraction:
    """The Bernoulli number B_k (B_2 = 1/6, B_12 = -691/2730).

    Odd ``k > 1`` is rejected: the value is zero and asking for it is taken as
    a caller bug.
    """
    if k < 0:
        raise ValueError(f"Bernoulli index must be nonnegative, got {k}")
    if k > 1 and k % 2:
        raise ValueError(f"B_{k} with odd k > 1 is identically zero; refusing")
    return bernoulli_table(k)[k]


def divisors(n: int) -> list[int]:
    """Sorted divisors of ``n`` by trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    small, large = [], []
    r = isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def sigma(e: int, n: int) -> int:
    """Sum of ``d**e`` over the divisors ``d`` of ``n``."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return sum(d**e for d in divisors(n))


def divisor_count(n: int) -> int:
    """Number of divisors d(n)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    count = 0
    r = isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


def eisenstein_factor(k: int) -> Fraction:
    """The exact rational -2k/B_k, i.e. the q-coefficient of E_k.

    Only weights ``k >= 4`` with ``k % 4 == 0`` are accepted; there the value
    is strictly positive.
    """
    if k < 4 or k % 4:
        raise ValueError(f"weight must satisfy k >= 4 and k = 0 mod 4, got {k}")
    return -2 * k / bernoulli(k)


def modinv(x: int, c: int) -> int:
    """Inverse of ``x`` modulo ``c`` via the extended Euclidean algorithm."""
    if c == 1:
        return 0
    old_r, r = x % c, c
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ValueError(f"{x} is not invertible modulo {c}")
    return old_s % c


def fraction_to_str(x: Fraction | int) -> str:
    """Render an exact rational as ``"num/den"`` (``"num"`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    """Inverse of :func:`fraction_to_str`. Decimal points are refused."""
    if "." in s or "e" in s.lower():
        raise ValueError(f"not an exact rational string: {s!r}")
    return Fraction(s)


def gcd3(a: int, b: int, c: int) -> int:
    """gcd(a, b, c)."""
    return gcd(gcd(a, b), c)

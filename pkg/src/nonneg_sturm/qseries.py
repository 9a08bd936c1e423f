"""Truncated q-expansions with exact coefficients.

A :class:`QExpansion` stores the coefficients of ``q**e`` for
``leading_exponent <= e < precision``; anything at or beyond ``precision`` is
unknown and never reported.  Coefficients are Python ``int`` or
:class:`~fractions.Fraction`, so all arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .exactnum import bernoulli, fraction_from_str, fraction_to_str, sigma

__all__ = [
    "QExpansion",
    "CanonicalBasis",
    "PrecisionError",
    "series_mul",
    "delta_qexp",
    "eisenstein_qexp",
    "j_qexp",
    "miller_basis",
    "dimension_ell",
]


class PrecisionError(ValueError):
    """A coefficient at or beyond the known precision was requested."""


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class QExpansion:
    """Truncated Laurent series ``sum_{e >= leading_exponent} c_e q**e + O(q**precision)``."""

    __slots__ = ("leading_exponent", "coefficients", "precision")

    def __init__(self, coefficients: Sequence, leading_exponent: int = 0, precision: int | None = None):
        coeffs = [_norm(c) for c in coefficients]
        if precision is None:
            precision = leading_exponent + len(coeffs)
        n = precision - leading_exponent
        if n <= 0:
            raise PrecisionError("empty valid range")
        if len(coeffs) < n:
            # Padded zeros are only legitimate when the caller vouches for them
            # by passing an explicit precision.
            coeffs = coeffs + [0] * (n - len(coeffs))
        elif len(coeffs) > n:
            coeffs = coeffs[:n]
        self.leading_exponent = leading_exponent
        self.coefficients = tuple(coeffs)
        self.precision = precision

    # construction helpers -------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict[int, object], precision: int, leading_exponent: int = 0) -> "QExpansion":
        coeffs = [0] * (precision - leading_exponent)
        for e, c in terms.items():
            if leading_exponent <= e < precision:
                coeffs[e - leading_exponent] = c
        return cls(coeffs, leading_exponent, precision)

    @classmethod
    def one(cls, precision: int) -> "QExpansion":
        return cls([1], 0, precision)

    # access ---------------------------------------------------------------

    def __getitem__(self, n: int):
        if n >= self.precision:
            raise PrecisionError(f"coefficient of q^{n} unknown (precision {self.precision})")
        if n < self.leading_exponent:
            return 0
        return self.coefficients[n - self.leading_exponent]

    def coeff_list(self, start: int, stop: int) -> list:
        return [self[n] for n in range(start, stop)]

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if c:
                return self.leading_exponent + i
        return None

    def is_integral(self) -> bool:
        return all(isinstance(c, int) or Fraction(c).denominator == 1 for c in self.coefficients)

    def truncate(self, precision: int) -> "QExpansion":
        if precision > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {precision}")
        return QExpansion(self.coefficients, self.leading_exponent, precision)

    def shift(self, k: int) -> "QExpansion":
        """Multiply by ``q**k``."""
        return QExpansion(self.coefficients, self.leading_exponent + k, self.precision + k)

    # arithmetic -----------------------------------------------------------

    def _aligned(self, other: "QExpansion"):
        lo = min(self.leading_exponent, other.leading_exponent)
        prec = min(self.precision, other.precision)
        return lo, prec

    def __add__(self, other):
        if isinstance(other, (int, Rational)):
            other = QExpansion([other], 0, self.precision)
        if not isinstance(other, QExpansion):
            return NotImplemented
        lo, prec = self._aligned(other)
        return QExpansion([self[n] + other[n] for n in range(lo, prec)], lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion([-c for c in self.coefficients], self.leading_exponent, self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return series_mul(self, other)
        if isinstance(other, (int, Rational)):
            return QExpansion([c * other for c in self.coefficients], self.leading_exponent, self.precision)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QExpansion":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers")
        v = self.valuation()
        if v is None:
            raise PrecisionError("power of a series with no known nonzero coefficient")
        # f = c q^v (1 + g); f^e = c^e q^{ve} (1+g)^e, valid for n - ve < precision - v.
        c = self[v]
        unit = [x / c if c != 1 else x for x in self.coefficients[v - self.leading_exponent:]]
        powered = _unit_power(unit, e, len(unit))
        scale = c**e
        return QExpansion([_norm(x * scale) for x in powered], v * e, v * e + len(unit))

    def inverse(self) -> "QExpansion":
        """Multiplicative inverse; the leading known coefficient must be nonzero."""
        v = self.valuation()
        if v is None:
            raise PrecisionError("cannot invert a series with no known nonzero coefficient")
        a = self.coefficients[v - self.leading_exponent:]
        n = len(a)
        inv = [Fraction(1) / a[0] if a[0] not in (1, -1) else a[0]]
        a0inv = inv[0]
        for i in range(1, n):
            s = sum(a[j] * inv[i - j] for j in range(1, i + 1))
            inv.append(_norm(-s * a0inv))
        return QExpansion(inv, -v, -v + n)

    def __truediv__(self, other):
        if isinstance(other, QExpansion):
            return self * other.inverse()
        return QExpansion(
            [_norm(Fraction(c) / other) for c in self.coefficients], self.leading_exponent, self.precision
        )

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        lo, prec = self._aligned(other)
        return all(self[n] == other[n] for n in range(lo, prec))

    def __hash__(self):
        return hash((self.leading_exponent, self.precision, self.coefficients))

    def __repr__(self):
        shown = []
        for i, c in enumerate(self.coefficients[:6]):
            if c:
                shown.append(f"{c}*q^{self.leading_exponent + i}")
        return f"QExpansion({' + '.join(shown) or '0'} + ... + O(q^{self.precision}))"

    # serialization --------------------------------------------------------

    def to_terms(self) -> list[list]:
        return [[self.leading_exponent + i, fraction_to_str(c)] for i, c in enumerate(self.coefficients)]

    def to_json(self) -> dict:
        return {
            "leading_exponent": self.leading_exponent,
            "precision": self.precision,
            "coefficients": self.to_terms(),
        }

    @classmethod
    def from_terms(cls, terms: Iterable, precision: int) -> "QExpansion":
        terms = [(int(e), fraction_from_str(c)) for e, c in terms]
        lead = min((e for e, _ in terms), default=0)
        return cls.from_dict(dict(terms), precision, lead)

    @classmethod
    def from_json(cls, doc: dict) -> "QExpansion":
        return cls.from_terms(doc["coefficients"], doc["precision"])


def _unit_power(f: Sequence, alpha: int, n: int) -> list:
    """First ``n`` coefficients of ``f**alpha`` for ``f[0] == 1``.

    Uses g_m = (1/m) sum_{i=1}^{m} ((alpha+1) i - m) f_i g_{m-i}, which only
    touches the nonzero entries of ``f`` (cheap for sparse products like the
    pentagonal series).
    """
    if f[0] != 1:
        raise ValueError("unit power needs constant term 1")
    support = [(i, f[i]) for i in range(1, min(n, len(f))) if f[i]]
    g = [1] + [0] * (n - 1)
    integral = all(isinstance(c, int) for _, c in support)
    for m in range(1, n):
        s = 0
        for i, fi in support:
            if i > m:
                break
            s += ((alpha + 1) * i - m) * fi * g[m - i]
        if integral:
            q, r = divmod(s, m)
            if r:
                raise ArithmeticError("non-integral power coefficient")  # pragma: no cover
            g[m] = q
        else:
            g[m] = _norm(Fraction(s, 1) / m)
    return g


def series_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    """Exact product truncated to the jointly valid range."""
    lead = a.leading_exponent + b.leading_exponent
    prec = min(a.precision + b.leading_exponent, b.precision + a.leading_exponent)
    n = prec - lead
    if n <= 0:
        raise PrecisionError("product has an empty valid range")
    ac, bc = a.coefficients, b.coefficients
    out = [0] * n
    nb = len(bc)
    for i, x in enumerate(ac[:n]):
        if not x:
            continue
        lim = min(nb, n - i)
        for j in range(lim):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return QExpansion(out, lead, prec)


# ---------------------------------------------------------------------------
# standard forms


@lru_cache(maxsize=None)
def _euler_product(n: int) -> tuple[int, ...]:
    # prod (1 - q^m) via the pentagonal number theorem.
    out = [0] * n
    out[0] = 1
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 >= n:
            break
        out[p1] += sign
        if p2 < n:
            out[p2] += sign
        k += 1
    return tuple(out)


@lru_cache(maxsize=None)
def _delta_power_unit(m: int, n: int) -> tuple[int, ...]:
    # (prod (1-q^i))^{24 m}, first n coefficients
    return tuple(_unit_power(_euler_product(n), 24 * m, n))


def delta_qexp(precision: int) -> QExpansion:
    """Delta = q prod (1 - q^n)^24 = sum tau(n) q^n, known for exponents < precision."""
    if precision < 2:
        raise ValueError("precision must be at least 2")
    return QExpansion(_delta_power_unit(1, precision - 1), 1, precision)


def delta_power(m: int, precision: int) -> QExpansion:
    """Delta**m to the given precision (single sparse power, no repeated products)."""
    if m == 0:
        return QExpansion.one(precision)
    if precision <= m:
        raise ValueError("precision must exceed the valuation")
    return QExpansion(_delta_power_unit(m, precision - m), m, precision)


def _eisenstein_factor_any(k: int) -> Fraction:
    return -2 * k / bernoulli(k)


def eisenstein_qexp(k: int, precision: int) -> QExpansion:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for even ``k >= 4``."""
    if k < 4 or k % 2:
        raise ValueError(f"Eisenstein series needs even k >= 4, got {k}")
    f = _eisenstein_factor_any(k)
    coeffs = [1] + [_norm(f * sigma(k - 1, n)) for n in range(1, precision)]
    return QExpansion(coeffs, 0, precision)


@lru_cache(maxsize=None)
def _e4_power_coeffs(a: int, n: int) -> tuple[int, ...]:
    e4 = [1] + [240 * sigma(3, m) for m in range(1, n)]
    return tuple(_unit_power(e4, a, n))


def e4_power(a: int, precision: int) -> QExpansion:
    return QExpansion(_e4_power_coeffs(a, precision), 0, precision)


def j_qexp(precision: int) -> QExpansion:
    """j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ..., known for exponents < precision."""
    if precision < 2:
        raise ValueError("precision must be at least 2")
    inner = precision + 2
    j = e4_power(3, inner) * delta_qexp(inner).inverse()
    return j.truncate(precision)


def dimension_ell(k: int) -> int:
    return k // 12


@dataclass(frozen=True)
class CanonicalBasis:
    """The echelonised basis F_{k,0}, ..., F_{k,ell} with F_{k,m} = q^m + O(q^{ell+1})."""

    weight: int
    ell: int
    forms: tuple[QExpansion, ...]
    precision: int

    def coefficient(self, m: int, n: int):
        return self.forms[m][n]

    def combination(self, a: Sequence) -> QExpansion:
        """F_{k,0} + sum_m a[m-1] F_{k,m}."""
        if len(a) != self.ell:
            raise ValueError(f"expected {self.ell} coefficients, got {len(a)}")
        f = self.forms[0]
        for m, am in enumerate(a, start=1):
            if am:
                f = f + self.forms[m] * am
        return f

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "ell": self.ell,
            "precision": self.precision,
            "forms": [f.to_terms() for f in self.forms],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc: dict) -> "CanonicalBasis":
        prec = doc["precision"]
        forms = tuple(QExpansion.from_terms(t, prec) for t in doc["forms"])
        forms = tuple(QExpansion(f.coeff_list(0, prec), 0, prec) for f in forms)
        return cls(doc["weight"], doc["ell"], forms, prec)


def miller_basis(k: int, precision: int) -> CanonicalBasis:
    """Canonical basis of M_k for ``k = 0 mod 4``.

    Starts from Delta^ell * j^(ell-m) * E_4^((k - 12 ell)/4), written without
    the pole as Delta^m * E_4^((k - 12 m)/4), then clears the coefficients of
    q^r (r <= ell, r != m) against the forms with larger m.
    """
    if k < 0 or k % 4:
        raise ValueError(f"weight must be a nonnegative multiple of 4, got {k}")
    ell = dimension_ell(k)
    if precision <= ell + 1:
        raise ValueError(f"precision must exceed ell+1 = {ell + 1}")
    gens = []
    for m in range(ell + 1):
        g = delta_power(m, precision) * e4_power((k - 12 * m) // 4, precision)
        gens.append(QExpansion(g.coeff_list(0, precision), 0, precision))
    forms: list[QExpansion | None] = [None] * (ell + 1)
    forms[ell] = gens[ell]
    for m in range(ell - 1, -1, -1):
        g = gens[m]
        coeffs = list(g.coefficients)
        for r in range(m + 1, ell + 1):
            lam = g[r]
            if lam:
                fr = forms[r].coefficients
                for i in range(precision):
                    if fr[i]:
                        coeffs[i] -= lam * fr[i]
        forms[m] = QExpansion(coeffs, 0, precision)
    for m, f in enumerate(forms):
        for r in range(ell + 1):
            if f[r] != (1 if r == m else 0):
                raise ArithmeticError(f"echelon property failed at F_{{{k},{m}}}, q^{r}")  # pragma: no cover
        if not f.is_integral():
            raise ArithmeticError(f"F_{{{k},{m}}} has non-integral coefficients")  # pragma: no cover
    return CanonicalBasis(k, ell, tuple(forms), precision)

"""Exact rational simplex method (dictionary form, Bland's rule).

Solves ``maximize c.x  subject to  A x <= b,  x >= 0`` over the rationals and
returns, alongside the primal answer, the dual object that proves it:

* ``optimal``    -- dual ``y >= 0`` with ``A^T y >= c`` and ``b.y == value``;
* ``infeasible`` -- Farkas vector ``y >= 0`` with ``A^T y >= 0`` and ``b.y < 0``;
* ``unbounded``  -- a feasible ``x`` and ray ``d >= 0`` with ``A d <= 0``, ``c.d > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "maximize"]


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    value: Fraction | None = None
    y: list[Fraction] | None = None
    ray: list[Fraction] | None = None
    pivots: int = 0


class _Dictionary:
    """x_B[i] = b[i] - sum_j a[i][j] x_N[j];  z = z0 + sum_j c[j] x_N[j]."""

    def __init__(self, a, b, c, basic, nonbasic):
        self.a = a
        self.b = b
        self.c = c
        self.z0 = Fraction(0)
        self.basic = basic
        self.nonbasic = nonbasic
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        a, b, c = self.a, self.b, self.c
        row = a[r]
        piv = row[s]
        inv = 1 / piv
        # Solve row r for the entering variable.
        new_row = [x * inv for x in row]
        new_row[s] = inv
        br = b[r] * inv
        for i in range(len(a)):
            if i == r:
                continue
            ai = a[i]
            f = ai[s]
            if not f:
                continue
            for j, v in enumerate(new_row):
                if v and j != s:
                    ai[j] -= f * v
            ai[s] = -f * inv
            b[i] -= f * br
        f = c[s]
        if f:
            for j, v in enumerate(new_row):
                if v and j != s:
                    c[j] -= f * v
            c[s] = -f * inv
            self.z0 += f * br
        a[r] = new_row
        b[r] = br
        self.basic[r], self.nonbasic[s] = self.nonbasic[s], self.basic[r]
        self.pivots += 1

    def run(self, forbid: int | None = None) -> int | None:
        """Bland's-rule simplex to optimality. Returns an unbounded column or None."""
        while True:
            s = None
            best = None
            for j, cj in enumerate(self.c):
                if cj > 0 and self.nonbasic[j] != forbid:
                    if best is None or self.nonbasic[j] < best:
                        best, s = self.nonbasic[j], j
            if s is None:
                return None
            r = None
            ratio = None
            for i, row in enumerate(self.a):
                if row[s] > 0:
                    q = self.b[i] / row[s]
                    if ratio is None or q < ratio or (q == ratio and self.basic[i] < self.basic[r]):
                        ratio, r = q, i
            if r is None:
                return s
            self.pivot(r, s)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize ``c.x`` over ``{x >= 0 : A x <= b}`` exactly."""
    m, n = len(A), len(c)
    a = [[Fraction(v) for v in row] for row in A]
    bb = [Fraction(v) for v in b]
    if any(len(row) != n for row in a):
        raise ValueError("constraint rows must match the number of variables")
    cc = [Fraction(v) for v in c]
    # variable ids: 0..n-1 originals, n..n+m-1 slacks, n+m auxiliary
    basic = list(range(n, n + m))
    aux = n + m
    pivots = 0

    if any(v < 0 for v in bb):
        # Phase I: maximise -x_aux with x_aux added to every row.
        d = _Dictionary([row + [Fraction(-1)] for row in a], bb[:], [Fraction(0)] * n + [Fraction(-1)],
                        basic[:], list(range(n)) + [aux])
        r = min(range(m), key=lambda i: (d.b[i], d.basic[i]))
        d.pivot(r, n)
        d.run()
        pivots += d.pivots
        if d.z0 < 0:
            y = _duals(d, n, m)
            return LPResult("infeasible", y=y, pivots=pivots)
        if aux in d.basic:
            # degenerate: pivot the auxiliary out on any nonzero entry
            r = d.basic.index(aux)
            s = next((j for j, v in enumerate(d.a[r]) if v), None)
            if s is None:
                del d.a[r], d.b[r], d.basic[r]
                s = None
            else:
                d.pivot(r, s)
        s = d.nonbasic.index(aux)
        for row in d.a:
            del row[s]
        del d.nonbasic[s]
        basic = d.basic
        nonbasic = d.nonbasic
        a, bb = d.a, d.b
        # objective in terms of the current nonbasic variables
        cvec = [Fraction(0)] * len(nonbasic)
        z0 = Fraction(0)
        pos = {v: j for j, v in enumerate(nonbasic)}
        for var in range(n):
            coef = cc[var]
            if not coef:
                continue
            if var in pos:
                cvec[pos[var]] += coef
            else:
                i = basic.index(var)
                z0 += coef * bb[i]
                for j, v in enumerate(a[i]):
                    if v:
                        cvec[j] -= coef * v
        d = _Dictionary(a, bb, cvec, basic, nonbasic)
        d.z0 = z0
    else:
        d = _Dictionary(a, bb, cc, basic, list(range(n)))

    s = d.run()
    pivots += d.pivots
    x = _primal(d, n)
    if s is not None:
        ray = [Fraction(0)] * n
        ent = d.nonbasic[s]
        if ent < n:
            ray[ent] = Fraction(1)
        for i, var in enumerate(d.basic):
            if var < n:
                ray[var] = -d.a[i][s]
        return LPResult("unbounded", x=x, ray=ray, pivots=pivots)
    return LPResult("optimal", x=x, value=d.z0, y=_duals(d, n, m), pivots=pivots)


def _primal(d: _Dictionary, n: int) -> list[Fraction]:
    x = [Fraction(0)] * n
    for i, var in enumerate(d.basic):
        if var < n:
            x[var] = d.b[i]
    return x


def _duals(d: _Dictionary, n: int, m: int) -> list[Fraction]:
    y = [Fraction(0)] * m
    for j, var in enumerate(d.nonbasic):
        if n <= var < n + m:
            y[var - n] = -d.c[j]
    return y

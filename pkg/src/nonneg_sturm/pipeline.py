"""Per-weight orchestration: basis at adequate precision, constants, A(k)."""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import BoundReport, _check_weight, c2_and_Bk, find_t, theorem1_bounds
from .errors import NotFoundError
from .polytope import AResult, compute_A
from .qseries import CanonicalBasis, PrecisionError, miller_basis

TABLE_WEIGHTS = tuple(range(12, 89, 4))
T_SEARCH_CAP = 2048


def basis_with_t(k: int, precision: int | None = None) -> tuple[CanonicalBasis, int]:
    """The Miller basis and t, growing the precision until t is found.

    An explicit ``precision`` is used as given, but t must then exist below it.
    """
    _check_weight(k)
    if precision is not None:
        basis = miller_basis(k, precision)
        return basis, find_t(basis)
    p = max(64, 2 * k)
    while True:
        basis = miller_basis(k, p)
        try:
            return basis, find_t(basis)
        except NotFoundError:
            if p >= T_SEARCH_CAP:
                raise
            p *= 2


@dataclass
class WeightRun:
    weight: int
    basis: CanonicalBasis
    report: BoundReport
    a: AResult | None = None

    @property
    def Bk(self) -> int:
        return self.report.Bk


def prepare(k: int, precision: int | None = None) -> WeightRun:
    """Basis (precision > B(k)) and the constants report for weight k."""
    basis, t = basis_with_t(k, precision)
    report = c2_and_Bk(k, basis, t)
    if basis.precision <= report.Bk:
        if precision is not None:
            raise PrecisionError(
                f"precision {precision} must exceed B({k}) = {report.Bk}; use at least {report.Bk + 1}"
            )
        basis = miller_basis(k, report.Bk + 1)
    return WeightRun(k, basis, report)


def run_weight(k: int, precision: int | None = None, certify: bool = True) -> WeightRun:
    run = prepare(k, precision)
    run.a = compute_A(k, run.basis, run.Bk, certify=certify)
    return run


def table1_row(run: WeightRun) -> dict:
    lo, up = theorem1_bounds(run.weight)
    return {"k": run.weight, "L(k)": lo, "A(k)": run.a.A, "U(k)": up}


def table2_row(run: WeightRun) -> dict:
    return {
        "k": run.weight,
        "t": run.report.t,
        "C_2": run.report.C2.upper_str(3),
        "B(k)": run.Bk,
        "A(k)": run.a.A,
    }

"""Exception types shared across modules, each tied to a CLI exit code."""

from __future__ import annotations

from .interval import EnclosureTooWide


class WeightError(ValueError):
    """Weight outside the range an operation supports."""

    exit_code = 2


class NotFoundError(LookupError):
    """No index t with every c_m(t) < 0 was found within the search limit."""

    exit_code = 3


class WidthNotReached(ArithmeticError):
    """The c-sum cap was hit before the requested enclosure width."""

    exit_code = 4

    def __init__(self, message: str, achieved_width=None):
        super().__init__(message)
        self.achieved_width = achieved_width


class Undecided(ArithmeticError):
    """A coefficient enclosure still straddles zero at the precision cap."""

    exit_code = 5

    def __init__(self, n: int, width=None):
        super().__init__(f"sign of b({n}) undecided (enclosure width {width})")
        self.n = n
        self.width = width


class HypothesisViolated(ValueError):
    """Inputs do not satisfy the hypothesis of the inequality being evaluated."""

    exit_code = 7


EnclosureTooWide.exit_code = 6

__all__ = [
    "WeightError",
    "NotFoundError",
    "WidthNotReached",
    "Undecided",
    "HypothesisViolated",
    "EnclosureTooWide",
]

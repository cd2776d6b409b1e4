"""
Derivative-free 1-D maximization.

`golden_section_max` shrinks a bracket by the inverse golden ratio per
evaluation and needs a unimodal objective; `prescan` samples the objective on
a coarse grid first so a multimodal profile is caught instead of silently
returning a local peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from pairsim.exceptions import InvalidSpecError

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass
class ScanResult:
    """Coarse samples of an objective over a bracket."""

    xs: List[float]
    ys: List[float]

    @property
    def best_index(self) -> int:
        return int(np.nanargmax(self.ys))

    @property
    def at_boundary(self) -> bool:
        return self.best_index in (0, len(self.xs) - 1)

    def bracket(self) -> Tuple[float, float]:
        """Neighbours of the best sample."""
        i = self.best_index
        return self.xs[max(i - 1, 0)], self.xs[min(i + 1, len(self.xs) - 1)]

    def to_dict(self) -> dict:
        return {"xs": list(self.xs), "ys": list(self.ys)}


def is_unimodal(ys, tol: float = 1e-12) -> bool:
    """
    True when the samples rise (weakly) and then fall (weakly).

    Differences within `tol` count as flat, so plateaus at either end (such as
    a concurrence clamped at zero) are accepted.
    """
    values = np.asarray(ys, dtype=float)
    if np.any(~np.isfinite(values)):
        return False
    falling = False
    for diff in np.diff(values):
        if diff > tol:
            if falling:
                return False
        elif diff < -tol:
            falling = True
    return True


def prescan(f: Callable[[float], float], lower: float, upper: float, points: int = 41) -> ScanResult:
    """Evaluate `f` on `points` evenly spaced values of [lower, upper]."""
    if points < 3:
        raise InvalidSpecError("pre-scan needs at least 3 points")
    xs = np.linspace(lower, upper, points)
    return ScanResult(xs=[float(x) for x in xs], ys=[float(f(x)) for x in xs])


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-6
) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [a, b].

    Ties keep the left part of the bracket, which follows a profile that is
    clamped flat to the right of its peak.

    Returns:
        tuple[float, float]: (x, f(x)) at the midpoint of the final bracket,
        whose width is at most `tol`.

    Example:
        >>> x, fx = golden_section_max(lambda x: -(x - 2) ** 2, 1, 5)
        >>> round(x, 5)
        2.0
    """
    if not tol > 0:
        raise InvalidSpecError("tol must be > 0")
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc >= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    lo, hi = (a, d) if yc >= yd else (c, b)
    x = (lo + hi) / 2
    return x, f(x)

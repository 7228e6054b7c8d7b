"""Analytic radius caps, shared-randomness cost bounds and exponent fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constructions import rotsym_planar_radius_closed_form
from .errors import InsufficientData, OutOfRange, Unsupported

PLANAR_THRESHOLD = 2.0 / math.pi
GENERAL_THRESHOLD = 0.5
SEPARABLE_THRESHOLD = 1.0 / 3.0


class BoundKind(str, Enum):
    UPPER_RADIUS = "upper_radius"
    LOWER_COST = "lower_cost"
    UPPER_COST = "upper_cost"


@dataclass(frozen=True)
class BoundReport:
    name: str
    at: float
    value: float
    kind: BoundKind

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise OutOfRange(f"{self.name} is not finite at {self.at}")

    def to_dict(self) -> dict:
        return {"name": self.name, "at": self.at, "value": self.value, "kind": self.kind.value}


def planar_radius_upper(n: int) -> float:
    """Inradius cap for any ``n``-outcome planar parent: ``cot(pi / 2n) / n``.

    This is the inradius of the regular ``2n``-gon with perimeter 4, the
    largest inradius a zonogon with ``n`` generators of total length 2 can
    have.
    """
    if n < 3:
        raise OutOfRange("n must be >= 3")
    x = math.pi / (2 * n)
    # cot(x)/n loses digits as n grows; cos(x) * (x / sin(x)) * (2/pi) is stable
    return PLANAR_THRESHOLD * math.cos(x) * (x / math.sin(x))


def planar_cost_bounds(r: float) -> tuple[float, float]:
    """Lower and upper bounds on the planar outcome count needed at noise ``r``."""
    if not 0.0 <= r < PLANAR_THRESHOLD:
        raise OutOfRange(f"r={r} outside [0, 2/pi)")
    gap = 1.0 / math.sqrt(PLANAR_THRESHOLD - r)
    lower = math.sqrt(math.pi / 6.0) * gap
    upper = math.sqrt(5.0 * math.pi / 12.0) * gap + 1.0
    return lower, upper


def simplex_radius_cap(n: int, planar: bool) -> float:
    """Exact optimum for the minimal outcome counts: 1/2 (planar n=3) or 1/3 (n=4)."""
    if planar and n == 3:
        return 0.5
    if not planar and n == 4:
        return 1.0 / 3.0
    raise Unsupported(f"no simplex cap for n={n}, planar={planar}")


def planar_cost_from_closed_form(r: float, n_max: int = 100_000) -> int:
    """Smallest ``n >= 3`` whose rotationally symmetric planar radius reaches ``r``.

    This is an upper bound on the planar cost; the cap in
    :func:`planar_radius_upper` makes it tight up to the odd/even wobble.
    """
    if not 0.0 <= r < PLANAR_THRESHOLD:
        raise OutOfRange(f"r={r} outside [0, 2/pi)")
    for n in range(3, n_max + 1):
        if rotsym_planar_radius_closed_form(n) >= r:
            return n
    raise OutOfRange(f"no n <= {n_max} reaches r={r}")


def planar_scaling_points(n_values) -> list[tuple[float, int]]:
    """``(closed-form radius, n)`` pairs sorted by radius."""
    pts = sorted((rotsym_planar_radius_closed_form(int(n)), int(n)) for n in n_values)
    return pts


def fit_scaling_exponent(points, threshold: float = PLANAR_THRESHOLD) -> float:
    """Least-squares slope of ``log N`` against ``-log(threshold - r)``.

    Parameters
    ----------
    points : sequence of (r, N)
        At least 4 pairs with ``r`` strictly increasing and below
        ``threshold``, and ``N >= 1``.
    threshold : float
        The critical noise, 2/pi for planar data or 1/2 for general data.

    Returns
    -------
    float
        The fitted exponent ``p`` in ``N ~ (threshold - r)^(-p)``.
    """
    pts = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if len(pts) < 4:
        raise InsufficientData(f"need at least 4 points, got {len(pts)}")
    r, N = pts[:, 0], pts[:, 1]
    if np.any(np.diff(r) <= 0):
        raise OutOfRange("r values must be strictly increasing")
    if np.any(r >= threshold):
        raise OutOfRange("all r must lie below the threshold")
    if np.any(N < 1):
        raise OutOfRange("outcome counts must be >= 1")
    x = -np.log(threshold - r)
    y = np.log(N)
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def general_exponent_soft_check(points, window: tuple[float, float] = (0.4, 0.8)):
    """Fit the general-parent exponent and report whether it lands in ``window``.

    Radii from searches or Thomson parents are only lower bounds, so this
    is a soft, budget-dependent check and is not part of the default test run.
    """
    p = fit_scaling_exponent(points, threshold=GENERAL_THRESHOLD)
    return p, window[0] <= p <= window[1]


def bound_reports(n: int | None = None, r: float | None = None) -> list[BoundReport]:
    out = []
    if n is not None:
        out.append(BoundReport("planar_radius_upper", float(n), planar_radius_upper(n), BoundKind.UPPER_RADIUS))
    if r is not None:
        lo, hi = planar_cost_bounds(r)
        out.append(BoundReport("planar_cost_lower", r, lo, BoundKind.LOWER_COST))
        out.append(BoundReport("planar_cost_upper", r, hi, BoundKind.UPPER_COST))
    return out

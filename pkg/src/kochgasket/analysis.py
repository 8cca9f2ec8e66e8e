"""Dimension and area of the gasket curves, analytic and empirical."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .geom import signed_areas
from .substitution import AspectLike, AspectParam, GasketState, union_area

KOCH_A = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class DimensionReport:
    a: float
    s: float
    residual: float
    iterations: int
    bracket: tuple[float, float]


def moran_residual(p: AspectParam, s: float) -> float:
    """``a**s + 2*((1-a²)/2)**s - 1``, evaluated without cancellation near a = 1."""
    return math.expm1(s * p.log) + 2.0 * math.exp(s * p.log_shrink)


def _moran_slope(p: AspectParam, s: float) -> float:
    return p.log * math.exp(s * p.log) + 2.0 * p.log_shrink * math.exp(s * p.log_shrink)


def dimension(a: AspectLike, tol: float = 1e-15) -> DimensionReport:
    """Solve the Moran equation for the curve with parameter ``a``.

    The residual is strictly decreasing in ``s`` and changes sign on [1, 2],
    so bisection cannot fail; one guarded Newton step polishes the result.
    """
    if not tol >= 1e-16:
        raise ParameterError("tol must be >= 1e-16")
    p = AspectParam.coerce(a)
    lo, hi = 1.0, 2.0
    f_lo = moran_residual(p, lo)
    if not f_lo > 0 > moran_residual(p, hi):
        raise ParameterError(f"no sign change on [1, 2] for a = {p.value!r}")
    n = 0
    while hi - lo > tol and n < 200:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = moran_residual(p, mid)
        n += 1
        if f_mid == 0.0:
            lo = hi = mid
            break
        if f_mid > 0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    r = moran_residual(p, s)
    slope = _moran_slope(p, s)
    if slope != 0.0:
        polished = s - r / slope
        if lo <= polished <= hi and abs(moran_residual(p, polished)) < abs(r):
            s = polished
            r = moran_residual(p, s)
    return DimensionReport(a=p.value, s=s, residual=abs(r), iterations=n, bracket=(lo, hi))


def dimension_profile(a_min: float, a_max: float, n: int, threads: int = 1) -> list[tuple[float, float]]:
    if not 0.0 < a_min < a_max < 1.0:
        raise ParameterError("need 0 < a_min < a_max < 1")
    if n < 2:
        raise ParameterError("need at least two samples")
    grid = np.linspace(a_min, a_max, n)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(dimension, grid))
    else:
        reports = [dimension(x) for x in grid]
    return [(float(x), rep.s) for x, rep in zip(grid, reports)]


@dataclass(frozen=True)
class MaxCheckReport:
    a: float
    h: float
    slope: float
    curvature: float
    passed: bool


def finite_differences(a: float, h: float) -> tuple[float, float]:
    """Central first and second differences of the dimension at ``a``."""
    lo, mid, hi = (dimension(a - h).s, dimension(a).s, dimension(a + h).s)
    return (hi - lo) / (2 * h), (hi - 2 * mid + lo) / (h * h)


def verify_max_at_koch(h: float = 1e-5) -> MaxCheckReport:
    """The dimension is stationary and concave at ``a = 1/sqrt(3)``."""
    if not 0.0 < h <= 1e-4:
        raise ParameterError("h must lie in (0, 1e-4]")
    slope, curv = finite_differences(KOCH_A, h)
    return MaxCheckReport(KOCH_A, h, slope, curv, abs(slope) < 1e-4 and curv < 0)


def area_closed_form(a: AspectLike) -> float:
    """Area enclosed by the limit curve."""
    a = AspectParam.coerce(a).value
    a2 = a * a
    return 8.0 * a / (1.0 + 4.0 * a2 - a2 * a2)


def shaded_x_equation(a: float, x: float) -> float:
    """Right-hand side of the quadrant area balance; ``x`` is its fixed point."""
    a2 = a * a
    return a * (1 - a2) ** 2 / 2 + (a * (1 - a2 * a2) / 4 - a2 * x) + 2 * ((1 - a2) / 2) ** 2 * x


def shaded_x(a: AspectLike) -> float:
    """Area inside the curve and inside one iteration-2 wedge."""
    a = AspectParam.coerce(a).value
    a2 = a * a
    x = a * (3 - 4 * a2 + a2 * a2) / (2 * (1 + 4 * a2 - a2 * a2))
    resid = abs(shaded_x_equation(a, x) - x)
    if resid > 1e-12:
        raise ParameterError(f"area balance not satisfied (residual {resid:g})")
    return x


def wedge_dart_diameters(a: AspectLike) -> tuple[float, float]:
    """Diameters of a height-1 wedge and a height-1 dart."""
    a = AspectParam.coerce(a).value
    w = (1 + a * a) ** 1.5 / (2 * a)
    d = max(2 * a, math.sqrt(1 + a * a))
    return w, d


@dataclass(frozen=True)
class BoxCountReport:
    levels: list[int]
    epsilons: list[float]
    counts: list[int]
    slope: float
    r_squared: float
    fit_from: int


def box_counting(points, levels: int = 10, drop: int = 2) -> BoxCountReport:
    """Box-counting slope of a planar point set on dyadic grids anchored at the origin.

    Grid ``j`` has cells of side ``L / 2**j`` where ``L`` is the smallest power
    of two covering the set's extent from the origin. The ``drop`` coarsest
    grids are left out of the least-squares fit.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 10_000:
        raise ParameterError(f"box counting needs at least 10^4 points, got {len(pts)}")
    if not 4 <= levels <= 12:
        raise ParameterError("levels must lie in [4, 12]")
    base = 2.0 ** math.ceil(math.log2(np.abs(pts).max()))
    js = list(range(1, levels + 1))
    eps = [base / 2**j for j in js]
    counts = []
    for e in eps:
        cells = np.floor(pts / e).astype(np.int64)
        # pack the two cell indices into one key; |index| <= 2**levels
        cells += 2**levels
        keys = cells[:, 0] << 32 | cells[:, 1]
        counts.append(int(len(np.unique(keys))))
    x = np.log(1.0 / np.array(eps[drop:]))
    y = np.log(np.array(counts[drop:], dtype=float))
    slope, icept = np.polyfit(x, y, 1)
    fit = slope * x + icept
    ss_res = float(((y - fit) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return BoxCountReport(js, eps, counts, float(slope), r2, js[drop])


def empirical_area(s: GasketState) -> float:
    """Shoelace area of the contact polyline at iteration ``s.k``."""
    if s.k < 4 or s.k % 2:
        raise ParameterError("empirical area needs an even iteration >= 4")
    return float(signed_areas(s.contacts))


def empirical_area_gap(s: GasketState) -> tuple[float, float]:
    """``(|empirical - closed form|, union_area)``; the first never exceeds the second."""
    return abs(empirical_area(s) - area_closed_form(s.a)), union_area(s)

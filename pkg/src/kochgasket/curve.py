"""The limit curve ``t -> f(a, t)`` and finite-depth checks on it.

Piece ``i`` at iteration ``k`` is the empty polygon the curve crosses while
``t`` runs over ``[i/2**k, (i+1)/2**k]``; it is entered at ``f(a, i/2**k)``,
which is a contact point and never moves again under refinement.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import shapely

from .errors import ParameterError, ResourceError
from .geom import polygon_diameter
from .substitution import (
    AspectLike,
    AspectParam,
    EmptyPolygon,
    GasketState,
    inscribe_rhombus,
    new_state,
)

#: ``eval`` refuses tolerances below this.
MIN_EVAL_TOL = 1e-12
#: Deepest single-branch refinement ``eval_curve`` will attempt.
MAX_EVAL_DEPTH = 20_000


@dataclass(frozen=True)
class CurvePiece:
    k: int
    index: int
    polygon: EmptyPolygon

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.index, 2**self.k), Fraction(self.index + 1, 2**self.k)

    @property
    def entry(self) -> tuple[float, float]:
        return self.polygon.entry

    @property
    def exit(self) -> tuple[float, float]:
        return self.polygon.exit


def polyline(s: GasketState) -> np.ndarray:
    """The ``2**k`` contacts in curve order, starting at ``(0, 1)``, counterclockwise."""
    return np.array(s.contacts)


def pieces(s: GasketState) -> list[CurvePiece]:
    return [CurvePiece(s.k, i, p) for i, p in enumerate(s.polygons)]


def locate(a: AspectLike, t: float, k: int) -> CurvePiece:
    """The iteration-``k`` piece containing ``t``, found by descending one branch."""
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"t must lie in [0, 1], got {t!r}")
    if not 1 <= k <= 60:
        raise ParameterError(f"depth must lie in [1, 60], got {k}")
    s = new_state(a)
    # exact binary digits of t; t == 1 is the same point as t == 0
    num = Fraction(t) % 1
    idx = math.floor(num * 2**k)
    poly = s.polygon(idx >> (k - 1))
    for level in range(2, k + 1):
        bit = (idx >> (k - level)) & 1
        _, _, kids = inscribe_rhombus(poly, s.a)
        poly = kids[bit]
    return CurvePiece(k, idx, poly)


def eval_curve(a: AspectLike, t: float, tol: float = 1e-9, max_depth: Optional[int] = None) -> tuple[float, float]:
    """A point within ``tol`` of ``f(a, t)``.

    Refines the piece containing ``t`` until its diameter drops below ``tol``
    and returns that piece's entry contact. The default depth limit is the
    one the convergence bound guarantees, capped at ``MAX_EVAL_DEPTH``.
    """
    if not tol >= MIN_EVAL_TOL:
        raise ParameterError(f"tol must be at least {MIN_EVAL_TOL}, got {tol!r}")
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"t must lie in [0, 1], got {t!r}")
    p = AspectParam.coerce(a)
    if max_depth is None:
        max_depth = min(MAX_EVAL_DEPTH, _depth_for(p, tol))
    s = new_state(p)
    frac = Fraction(t) % 1
    depth = 1
    idx = math.floor(frac * 2)
    poly = s.polygon(idx)
    while polygon_diameter(poly.vertices) >= tol:
        if depth >= max_depth:
            raise ResourceError(f"no piece of diameter < {tol} within depth {max_depth}")
        depth += 1
        bit = math.floor(frac * 2**depth) & 1
        _, _, kids = inscribe_rhombus(poly, p)
        poly = kids[bit]
    return poly.entry


def _depth_for(p: AspectParam, tol: float) -> int:
    """Iterations after which the convergence bound is below ``tol``."""
    # (2/a) q**(k-1) < tol with q = (1+a)/2, at iteration 2k
    log_q = math.log1p(-p.complement / 2) if p.complement is not None else math.log((1 + p.value) / 2)
    k = 1 + math.ceil(math.log(tol * p.value / 2) / log_q)
    return 2 * max(k, 1) + 2


def convergence_bound(a: AspectLike, k: int) -> float:
    """Upper bound on every empty-polygon diameter at iteration ``2k``."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    a = AspectParam.coerce(a).value
    return (2.0 / a) * ((1.0 + a) / 2.0) ** (k - 1)


@dataclass
class SimplicityReport:
    k: int
    a: float
    tol: float
    n_polygons: int
    pairs_checked: int
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _far_from(pts: np.ndarray, shared: np.ndarray, tol: float) -> bool:
    d = np.linalg.norm(pts[:, None, :] - shared[None, :, :], axis=-1).min(axis=1)
    return bool(len(pts)) and float(d.max()) > tol


def _check_adjacent(geoms, i: int, j: int, shared: np.ndarray, tol: float) -> list[dict]:
    """``shared`` holds the contacts the two polygons are allowed to meet at."""
    out = []
    gi, gj = geoms[i], geoms[j]
    pts = shapely.points(shared)
    if shapely.distance(pts, gi).max() > tol or shapely.distance(pts, gj).max() > tol:
        out.append({"pair": [i, j], "kind": "contact-not-on-boundary"})
        return out
    if gi.distance(gj) > tol:
        out.append({"pair": [i, j], "kind": "adjacent-disjoint"})
        return out
    inter = gi.intersection(gj)
    if not inter.is_empty:
        if inter.area > tol * tol:
            out.append({"pair": [i, j], "kind": "interiors-overlap", "area": inter.area})
        if _far_from(shapely.get_coordinates(inter), shared, tol):
            out.append({"pair": [i, j], "kind": "extra-intersection"})
    # points of one polygon near the other must all sit near the contact
    for a_, b_ in ((gi, gj), (gj, gi)):
        v = shapely.get_coordinates(a_.exterior)[:-1]
        d = shapely.distance(shapely.points(v), b_)
        if _far_from(v[d <= tol], shared, tol):
            out.append({"pair": [i, j], "kind": "vertex-touch-away-from-contact"})
            break
    return out


def check_simple(s: GasketState, tol: float = 1e-12, threads: int = 1) -> SimplicityReport:
    """Finite-depth Jordan check on the empty polygons of ``s``.

    Cyclically adjacent polygons must meet exactly at their shared contact;
    every other pair must be disjoint. Candidate pairs come from an STR-tree
    query with a ``tol`` search band.
    """
    n = len(s)
    geoms = np.array([shapely.Polygon(v) for v in s.polygon_vertices()], dtype=object)
    contacts = s.contacts
    tree = shapely.STRtree(geoms)
    left, right = tree.query(geoms, predicate="dwithin", distance=tol)
    keep = left < right
    left, right = left[keep], right[keep]
    report = SimplicityReport(s.k, s.a.value, tol, n, int(len(left)))

    gap = (right - left) % n
    adjacent = (gap == 1) | (gap == n - 1)
    for i, j in zip(left[~adjacent], right[~adjacent]):
        report.violations.append({"pair": [int(i), int(j)], "kind": "non-adjacent-touch"})

    # every cyclic neighbour pair must have been found by the tree query
    found = set(zip(left[adjacent].tolist(), right[adjacent].tolist()))
    expected = [(i, (i + 1) % n) for i in range(n if n > 2 else 1)]

    def work(pair):
        i, j = pair
        lo, hi = min(i, j), max(i, j)
        if (lo, hi) not in found:
            return [{"pair": [lo, hi], "kind": "adjacent-disjoint"}]
        # with two polygons each is the other's neighbour on both sides
        shared = contacts if n == 2 else contacts[j : j + 1]
        return _check_adjacent(geoms, i, j, shared, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, expected))
    else:
        results = [work(p) for p in expected]
    for r in results:
        report.violations.extend(r)
    return report


def polyline_at(points: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Piecewise-linear closed curve through ``points`` at equal parameter steps."""
    n = len(points)
    u = (np.asarray(t, dtype=float) % 1.0) * n
    i = np.minimum(np.floor(u).astype(int), n - 1)
    w = (u - i)[:, None]
    return (1 - w) * points[i] + w * points[(i + 1) % n]


def refinement_gap(coarse: GasketState, fine: GasketState, samples: int = 4096, seed: int = 0) -> float:
    """Sup over sampled ``t`` of the distance between the two polyline approximants."""
    rng = np.random.default_rng(seed)
    t = np.concatenate([np.linspace(0.0, 1.0, samples, endpoint=False), rng.random(samples)])
    d = polyline_at(coarse.contacts, t) - polyline_at(fine.contacts, t)
    return float(np.linalg.norm(d, axis=1).max())

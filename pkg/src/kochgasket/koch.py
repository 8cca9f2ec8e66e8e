"""The classical Koch snowflake and its comparison with the gasket at ``a = 1/sqrt(3)``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy.spatial import cKDTree

from .errors import InvariantError, ParameterError, ResourceError
from .geom import signed_areas
from .substitution import AspectLike, AspectParam, run_to

#: Deepest snowflake level built (3 * 4**12 vertices).
MAX_LEVEL = 12
KOCH_A = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True)
class SnowflakeAnchor:
    vertices: np.ndarray  # (3, 2), counterclockwise

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.shape != (3, 2):
            raise ParameterError("anchor needs exactly three vertices")
        sides = np.linalg.norm(v - np.roll(v, -1, axis=0), axis=1)
        if np.ptp(sides) > 1e-12 * sides.max():
            raise ParameterError("anchor triangle is not equilateral")
        if signed_areas(v) <= 0:
            raise ParameterError("anchor triangle must be counterclockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def side(self) -> float:
        return float(np.linalg.norm(self.vertices[1] - self.vertices[0]))


@dataclass(frozen=True)
class SnowflakePolyline:
    level: int
    vertices: np.ndarray  # (3 * 4**level, 2)


def _refine(v: np.ndarray, outward_sign: float) -> np.ndarray:
    p = v
    q = np.roll(v, -1, axis=0)
    d = (q - p) / 3.0
    one = p + d
    two = p + 2.0 * d
    # 60 degree turn of the middle third; its sign picks the side of travel
    c, s = 0.5, outward_sign * math.sqrt(3.0) / 2.0
    tip = one + np.stack([c * d[:, 0] - s * d[:, 1], s * d[:, 0] + c * d[:, 1]], axis=1)
    return np.stack([p, one, tip, two], axis=1).reshape(-1, 2)


def snowflake(anchor: SnowflakeAnchor, k: int) -> SnowflakePolyline:
    """Level-``k`` snowflake polygon with ``3 * 4**k`` vertices.

    Spikes go to whichever side raises the enclosed area; for a
    counterclockwise polygon that is the right of the direction of travel.
    """
    if k < 0:
        raise ParameterError("level must be >= 0")
    if k > MAX_LEVEL:
        raise ResourceError(f"level {k} exceeds the cap of {MAX_LEVEL}")
    v = np.array(anchor.vertices)
    for _ in range(k):
        orientation = math.copysign(1.0, float(signed_areas(v)))
        v = _refine(v, -orientation)
    v.setflags(write=False)
    return SnowflakePolyline(k, v)


def snowflake_area(side: float) -> float:
    """Area enclosed by the limit snowflake on an equilateral triangle of this side."""
    return 0.4 * math.sqrt(3.0) * side * side


def gasket_alignment(tol: float = 1e-12) -> SnowflakeAnchor:
    """The triangle that puts the snowflake into the gasket's frame.

    Circumradius 1 with a vertex at the top contact ``(0, 1)``. Checked on
    construction: the iteration-2 contacts must be snowflake vertices.
    """
    h = math.sqrt(3.0) / 2.0
    anchor = SnowflakeAnchor(np.array([[0.0, 1.0], [-h, -0.5], [h, -0.5]]))
    verts = snowflake(anchor, 1).vertices
    contacts = run_to(KOCH_A, 2).contacts
    dist, _ = cKDTree(verts).query(contacts)
    if dist.max() > tol:
        raise InvariantError(f"anchor misses an iteration-2 contact by {dist.max():g}")
    return anchor


@dataclass
class EquivalenceReport:
    k: int
    a: float
    tol: float
    n_contacts: int
    matches: list[dict] = field(default_factory=list)
    max_mismatch: float = 0.0
    in_order: bool = False
    n_samples: int = 0
    samples_outside: int = 0
    max_sample_gap: float = 0.0

    @property
    def passed(self) -> bool:
        return self.max_mismatch <= self.tol and self.in_order and self.samples_outside == 0


def verify_equivalence(
    k: int, tol: float = 1e-9, a: AspectLike = KOCH_A, samples_per_segment: int = 8
) -> EquivalenceReport:
    """Compare the iteration-``2k`` gasket with the level-``k`` snowflake.

    Checks that each of the ``4**k`` contacts is a snowflake vertex (and, in
    curve order, exactly every third one), and that points sampled along the
    snowflake edges fall in the union of the iteration-``2k`` empty polygons.
    """
    if not 1 <= k <= 6:
        raise ParameterError(f"k must lie in [1, 6], got {k}")
    p = AspectParam.coerce(a)
    state = run_to(p, 2 * k)
    flake = snowflake(gasket_alignment(), k).vertices
    contacts = state.contacts
    report = EquivalenceReport(k, p.value, tol, len(contacts))

    dist, idx = cKDTree(flake).query(contacts)
    report.matches = [
        {"contact": i, "vertex": int(j), "distance": float(d)} for i, (j, d) in enumerate(zip(idx, dist))
    ]
    report.max_mismatch = float(dist.max())
    report.in_order = bool(np.array_equal(idx, 3 * np.arange(len(contacts))))

    m = samples_per_segment
    w = (np.arange(m) / m)[None, :, None]
    seg_a = flake[:, None, :]
    seg_b = np.roll(flake, -1, axis=0)[:, None, :]
    pts = ((1 - w) * seg_a + w * seg_b).reshape(-1, 2)
    geoms = [shapely.Polygon(v) for v in state.polygon_vertices()]
    tree = shapely.STRtree(geoms)
    hit_pt, _ = tree.query(shapely.points(pts), predicate="dwithin", distance=tol)
    covered = np.zeros(len(pts), dtype=bool)
    covered[hit_pt] = True
    report.n_samples = len(pts)
    report.samples_outside = int(np.count_nonzero(~covered))
    if report.samples_outside:
        union = shapely.union_all(geoms)
        report.max_sample_gap = float(shapely.distance(shapely.points(pts[~covered]), union).max())
    return report

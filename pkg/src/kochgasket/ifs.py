"""Three-map similarity system for one quadrant of the gasket curve.

The quadrant arc runs from ``A = (a, 0)`` to ``C = (0, 1)`` inside the
iteration-2 wedge ``ABC``. It splits at two deeper contacts ``H`` and ``G``
into three arcs similar to the whole: ``S3`` takes it onto the arc from A to
H, ``S2`` onto H..G and ``S1`` (ratio ``a``, fixing C) onto G..C.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from scipy.optimize import brentq

from .curve import convergence_bound
from .errors import InvariantError, ParameterError, ResourceError
from .geom import PlaneSimilarity, cloud_distance, signed_areas
from .substitution import AspectLike, AspectParam, GasketState, Kind, run_to

MAX_ATTRACTOR_DEPTH = 14
_GRID = 1e-12


@dataclass(frozen=True)
class QuadrantSystem:
    a: float
    maps: tuple[PlaneSimilarity, PlaneSimilarity, PlaneSimilarity]
    ratios: tuple[float, float, float]
    points: dict[str, tuple[float, float]]

    def triangle(self) -> np.ndarray:
        return np.array([self.points["A"], self.points["B"], self.points["C"]])

    def with_map(self, i: int, new: PlaneSimilarity) -> "QuadrantSystem":
        maps = list(self.maps)
        maps[i] = new
        ratios = list(self.ratios)
        ratios[i] = new.ratio
        return QuadrantSystem(self.a, tuple(maps), tuple(ratios), dict(self.points))


def _inside_triangle(q: np.ndarray, tri: np.ndarray, tol: float) -> np.ndarray:
    """Closed-triangle membership for points ``q`` with a ``tol`` band."""
    orient = math.copysign(1.0, float(signed_areas(tri)))
    ok = np.ones(len(q), dtype=bool)
    for i in range(3):
        p0, p1 = tri[i], tri[(i + 1) % 3]
        edge = p1 - p0
        cross = edge[0] * (q[:, 1] - p0[1]) - edge[1] * (q[:, 0] - p0[0])
        ok &= orient * cross / np.hypot(*edge) >= -tol
    return ok


def _overlap_area(t1: np.ndarray, t2: np.ndarray) -> float:
    return float(shapely.Polygon(t1).intersection(shapely.Polygon(t2)).area)


def quadrant_system(a: AspectLike, tol: float = 1e-9) -> QuadrantSystem:
    """Build ``S1, S2, S3`` from the construction and check them.

    ``H`` and ``G`` are the contacts that iterations 3 and 4 add inside the
    upper-right wedge. Each map is fixed by two point correspondences plus a
    reflection flag; the flag is the one that sends ``B`` onto the remaining
    vertex of the construction's piece for that arc, and it must be unique.
    """
    p = AspectParam.coerce(a)
    av, r = p.value, p.shrink
    A = np.array([av, 0.0])
    B = np.array([(1 + av * av) / (2 * av), r])
    C = np.array([0.0, 1.0])
    tri = np.array([A, B, C])

    # the upper-right wedge is the last of four pieces at iteration 2: its
    # pieces are 6..7 at iteration 3 and 12..15 at iteration 4
    s3, s4 = run_to(p, 3), run_to(p, 4)
    quad = s4.contacts[12:16]
    if np.abs(quad[0] - A).max() > tol:
        raise InvariantError("upper-right wedge does not start at A")
    H, G = quad[1], quad[2]
    targets = [s3.polygon(7).vertices, s4.polygon(13).vertices, s4.polygon(12).vertices]

    pairs = [((C, A), (C, G)), ((A, C), (H, G)), ((A, C), (H, A))]
    maps = []
    for (src, dst), piece in zip(pairs, targets):
        fits = []
        for flip in (False, True):
            m = PlaneSimilarity.from_points(*src, *dst, reflect=flip)
            if np.linalg.norm(piece - m(B), axis=1).min() <= tol:
                fits.append(m)
        if len(fits) != 1:
            raise InvariantError(f"expected one orientation per map, found {len(fits)}")
        maps.append(fits[0])
    S1, S2, S3 = maps

    points = {
        "A": A, "B": B, "C": C,
        "D": S1(B), "E": S3(B), "F": S2(B), "G": G, "H": H,
    }
    sys_ = QuadrantSystem(
        a=av,
        maps=(S1, S2, S3),
        ratios=(av, r, r),
        points={k: (float(v[0]), float(v[1])) for k, v in points.items()},
    )
    bad = [name for name, ok in system_invariants(sys_, tol).items() if not ok]
    imgs = [m(tri) for m in maps]
    if not all(_inside_triangle(img, tri, tol).all() for img in imgs):
        bad.append("images inside ABC")
    if any(_overlap_area(imgs[i], imgs[j]) > tol for i, j in ((0, 1), (0, 2), (1, 2))):
        bad.append("disjoint images")
    if bad:
        raise InvariantError(f"quadrant system fails: {', '.join(bad)}")
    return sys_


def measured_ratios(sys_: QuadrantSystem, n_pairs: int = 100, seed: int = 0) -> list[np.ndarray]:
    """Distance ratios ``|S(p) - S(q)| / |p - q|`` on random pairs, per map."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(-2, 2, (n_pairs, 2))
    q = rng.uniform(-2, 2, (n_pairs, 2))
    base = np.linalg.norm(p - q, axis=1)
    return [np.linalg.norm(m(p) - m(q), axis=1) / base for m in sys_.maps]


def rhombus_ahgd_area(sys_: QuadrantSystem) -> float:
    pts = sys_.points
    return abs(float(signed_areas(np.array([pts["A"], pts["H"], pts["G"], pts["D"]]))))


def system_invariants(sys_: QuadrantSystem, tol: float = 1e-9) -> dict[str, bool]:
    P = {k: np.asarray(v) for k, v in sys_.points.items()}
    S1, S2, S3 = sys_.maps

    def at(m, src, dst):
        return bool(np.abs(m(P[src]) - P[dst]).max() <= tol)

    ratio_ok = all(
        np.abs(rs - want).max() <= 1e-12 for rs, want in zip(measured_ratios(sys_), sys_.ratios)
    )
    a = sys_.a
    return {
        "ratios": ratio_ok,
        "S1 fixes C": at(S1, "C", "C"),
        "S1(A)=G": at(S1, "A", "G"),
        "S1(B)=D": at(S1, "B", "D"),
        "S2(A)=H": at(S2, "A", "H"),
        "S2(B)=F": at(S2, "B", "F"),
        "S2(C)=G": at(S2, "C", "G"),
        "S3(A)=H": at(S3, "A", "H"),
        "S3(B)=E": at(S3, "B", "E"),
        "S3(C)=A": at(S3, "C", "A"),
        "area(AHGD)": abs(rhombus_ahgd_area(sys_) - a * (1 - a * a) ** 2 / 2) <= tol,
    }


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    method: str
    depth: int
    seed: int | None = None


def _dedupe(pts: np.ndarray) -> np.ndarray:
    keys = np.round(pts / _GRID).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    return pts[np.sort(first)]


def attractor(sys_: QuadrantSystem, depth: int) -> PointCloud:
    """Images of ``{A, C}`` under every word of length ``depth`` in the three maps."""
    if depth < 1:
        raise ParameterError("depth must be >= 1")
    if depth > MAX_ATTRACTOR_DEPTH:
        raise ResourceError(f"depth {depth} exceeds the cap of {MAX_ATTRACTOR_DEPTH}")
    pts = np.array([sys_.points["A"], sys_.points["C"]])
    for _ in range(depth):
        pts = _dedupe(np.concatenate([m(pts) for m in sys_.maps]))
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return PointCloud(pts[order], "deterministic", depth)


def quadrant_contacts(s: GasketState, tol: float = 1e-12) -> np.ndarray:
    c = s.contacts
    return c[(c[:, 0] >= -tol) & (c[:, 1] >= -tol)]


def max_polygon_diameter(s: GasketState) -> float:
    best = 0.0
    for kind in Kind:
        _, v = s.vertices_of_kind(kind)
        if len(v):
            d = v[:, :, None, :] - v[:, None, :, :]
            best = max(best, float(np.sqrt((d * d).sum(-1)).max()))
    return best


@dataclass
class SelfSimilarityReport:
    a: float
    k: int
    n_points: int
    distance: float
    threshold: float
    max_diameter: float
    convergence_bound: float

    @property
    def passed(self) -> bool:
        return self.distance <= self.threshold


def verify_self_similarity(sys_: QuadrantSystem, s: GasketState, tol: float = 1e-3) -> SelfSimilarityReport:
    """Compare the quadrant's contacts ``Q`` with ``S1(Q) ∪ S2(Q) ∪ S3(Q)``.

    The allowance is ``tol`` plus the largest empty-polygon diameter at
    ``s.k``, which both clouds approximate the limit set to within.
    """
    if s.k < 8 or s.k % 2:
        raise ParameterError("self-similarity check needs an even iteration >= 8")
    Q = quadrant_contacts(s)
    images = np.concatenate([m(Q) for m in sys_.maps])
    diam = max_polygon_diameter(s)
    return SelfSimilarityReport(
        a=sys_.a,
        k=s.k,
        n_points=len(Q),
        distance=cloud_distance(Q, images),
        threshold=tol + diam,
        max_diameter=diam,
        convergence_bound=convergence_bound(sys_.a, s.k // 2),
    )


@dataclass
class OpenSetReport:
    a: float
    n_samples: int
    seed: int
    escaped: list[int] = field(default_factory=list)  # per map
    overlaps: dict[str, float] = field(default_factory=dict)
    tol: float = 1e-12

    @property
    def passed(self) -> bool:
        return not any(self.escaped) and all(v <= self.tol for v in self.overlaps.values())


def verify_open_set(sys_: QuadrantSystem, n_samples: int = 10_000, seed: int = 0, tol: float = 1e-12) -> OpenSetReport:
    """Open set condition with the open triangle ``ABC`` as the test set."""
    if n_samples < 10_000:
        raise ParameterError("need at least 10^4 samples")
    tri = sys_.triangle()
    rng = np.random.default_rng(seed)
    u = rng.random((n_samples, 2))
    fold = u.sum(axis=1) > 1
    u[fold] = 1 - u[fold]
    pts = tri[0] + u[:, :1] * (tri[1] - tri[0]) + u[:, 1:] * (tri[2] - tri[0])
    report = OpenSetReport(sys_.a, n_samples, seed, tol=tol)
    report.escaped = [int(np.count_nonzero(~_inside_triangle(m(pts), tri, tol))) for m in sys_.maps]
    imgs = [m(tri) for m in sys_.maps]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        report.overlaps[f"S{i + 1}S{j + 1}"] = _overlap_area(imgs[i], imgs[j])
    return report


def moran_dimension(ratios) -> float:
    """The ``s >= 0`` with ``sum(c**s) == 1``."""
    c = np.asarray(list(ratios), dtype=float)
    if len(c) == 0 or np.any(c <= 0) or np.any(c >= 1):
        raise ParameterError("ratios must be a nonempty list of values in (0, 1)")
    if len(c) == 1:
        return 0.0
    logs = np.log(c)
    hi = math.log(len(c)) / -logs.max()

    def f(s):
        return float(np.exp(s * logs).sum() - 1.0)

    return brentq(f, 0.0, hi * (1 + 1e-12) + 1e-300, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)

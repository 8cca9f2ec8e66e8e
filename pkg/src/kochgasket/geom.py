"""Plane primitives shared by the construction, curve and IFS code.

Points are ``(x, y)`` pairs and polygons are ``(n, 2)`` float arrays listed
counterclockwise and closed implicitly. Similarities carry their orthogonal
part as an element of the dihedral group D4, stored symbolically so that
composing placements never accumulates rounding in the rotation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

from .errors import DegenerateGeometryError, ParameterError

#: Default geometric tolerance, in units where the initial rhombus has height 2.
TOL = 1e-9

PointLike = Union[tuple[float, float], np.ndarray]


class D4(enum.IntEnum):
    """Symmetries of the square, acting on column vectors."""

    IDENTITY = 0
    ROT90 = 1
    ROT180 = 2
    ROT270 = 3
    REFLECT_X = 4  # (x, y) -> (x, -y)
    REFLECT_Y = 5  # (x, y) -> (-x, y)
    SWAP = 6  # (x, y) -> (y, x)
    ANTISWAP = 7  # (x, y) -> (-y, -x)

    @property
    def matrix(self) -> np.ndarray:
        return _D4_MATRICES[self]

    @property
    def is_reflection(self) -> bool:
        return self >= D4.REFLECT_X

    @property
    def swaps_axes(self) -> bool:
        """True when horizontal directions are sent to vertical ones."""
        return self in (D4.ROT90, D4.ROT270, D4.SWAP, D4.ANTISWAP)

    def __matmul__(self, other: "D4") -> "D4":
        return D4(_D4_PRODUCT[self, other])

    def inverse(self) -> "D4":
        return D4(_D4_INVERSE[self])


_D4_MATRICES = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, -1], [1, 0]],
        [[-1, 0], [0, -1]],
        [[0, 1], [-1, 0]],
        [[1, 0], [0, -1]],
        [[-1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1], [-1, 0]],
    ],
    dtype=np.int64,
)


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    lookup = {m.tobytes(): i for i, m in enumerate(_D4_MATRICES)}
    product = np.empty((8, 8), dtype=np.int8)
    for i in range(8):
        for j in range(8):
            product[i, j] = lookup[(_D4_MATRICES[i] @ _D4_MATRICES[j]).tobytes()]
    inverse = np.array([int(np.nonzero(product[i] == 0)[0][0]) for i in range(8)], dtype=np.int8)
    return product, inverse


_D4_PRODUCT, _D4_INVERSE = _build_tables()

#: Float copy of the D4 matrices, for vectorised placement arithmetic.
D4_MATRICES = _D4_MATRICES.astype(float)
#: ``D4_PRODUCT[i, j]`` is the index of ``D4(i) @ D4(j)``.
D4_PRODUCT = _D4_PRODUCT


@dataclass(frozen=True)
class SimilarityMap:
    """``p -> scale * ortho(p) + shift`` with ``ortho`` in D4."""

    scale: float = 1.0
    ortho: D4 = D4.IDENTITY
    shift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ParameterError(f"similarity scale must be positive and finite, got {self.scale}")
        object.__setattr__(self, "ortho", D4(self.ortho))
        object.__setattr__(self, "shift", (float(self.shift[0]), float(self.shift[1])))

    @property
    def matrix(self) -> np.ndarray:
        return self.scale * self.ortho.matrix.astype(float)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        return pts @ self.matrix.T + np.asarray(self.shift)

    def compose(self, inner: "SimilarityMap") -> "SimilarityMap":
        """Return ``self ∘ inner``."""
        shift = self(np.asarray(inner.shift))
        return SimilarityMap(self.scale * inner.scale, self.ortho @ inner.ortho, tuple(shift))

    def inverse(self) -> "SimilarityMap":
        inv = self.ortho.inverse()
        shift = -(inv.matrix @ np.asarray(self.shift)) / self.scale
        return SimilarityMap(1.0 / self.scale, inv, tuple(shift))


def apply_similarity(T: SimilarityMap, g: PointLike):
    """Apply ``T`` to a point or to every vertex of a polygon.

    A single point given as a tuple comes back as a tuple; arrays come back as
    arrays of the same shape. Vertex order is kept, so a reflection reverses
    the orientation of a polygon.
    """
    out = T(g)
    if isinstance(g, tuple):
        return (float(out[0]), float(out[1]))
    return out


def as_polygon(p, tol: float = TOL) -> np.ndarray:
    """Validate and return polygon vertices as an ``(n, 2)`` array."""
    v = np.asarray(p, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise DegenerateGeometryError("a polygon needs at least 3 vertices")
    if not np.all(np.isfinite(v)):
        raise DegenerateGeometryError("polygon has non-finite coordinates")
    gaps = np.linalg.norm(v - np.roll(v, -1, axis=0), axis=1)
    if np.any(gaps <= tol):
        raise DegenerateGeometryError("polygon has repeated consecutive vertices")
    return v


def signed_areas(polys: np.ndarray) -> np.ndarray:
    """Shoelace signed area for a stack of polygons shaped ``(..., n, 2)``."""
    x = polys[..., 0]
    y = polys[..., 1]
    return 0.5 * np.sum(x * np.roll(y, -1, axis=-1) - np.roll(x, -1, axis=-1) * y, axis=-1)


def polygon_area(p, tol: float = TOL) -> float:
    """Signed shoelace area, positive for counterclockwise polygons."""
    v = as_polygon(p, tol)
    area = float(signed_areas(v))
    scale = np.ptp(v, axis=0).max()
    if abs(area) <= tol * scale * scale:
        raise DegenerateGeometryError(f"polygon is degenerate (area {area:g})")
    return area


def polygon_diameter(p) -> float:
    v = as_polygon(p, tol=0.0)
    if len(v) > 64:
        v = v[ConvexHull(v).vertices]
    d = v[:, None, :] - v[None, :, :]
    return float(np.sqrt((d * d).sum(-1)).max())


def segment_distances(q: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points ``q`` (m, 2) to segments ``a -> b`` (n, 2); shape (m, n)."""
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    aq = q[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("mnj,nj->mn", aq, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    closest = a[None, :, :] + t[..., None] * ab[None, :, :]
    return np.linalg.norm(q[:, None, :] - closest, axis=-1)


def winding_numbers(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Winding number of polygon ``p`` around each point of ``q``."""
    a = p
    b = np.roll(p, -1, axis=0)
    qy = q[:, 1:2]
    cross = (b[:, 0] - a[:, 0]) * (qy - a[:, 1]) - (q[:, 0:1] - a[:, 0]) * (b[:, 1] - a[:, 1])
    up = (a[:, 1] <= qy) & (b[:, 1] > qy) & (cross > 0)
    down = (a[:, 1] > qy) & (b[:, 1] <= qy) & (cross < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def point_in_polygon(
    q: PointLike, p, tol: float = TOL
) -> Literal["inside", "boundary", "outside"]:
    """Classify ``q`` against ``p``; points within ``tol`` of an edge are on the boundary."""
    if not tol > 0:
        raise ParameterError("tol must be positive")
    v = as_polygon(p, tol=0.0)
    pt = np.asarray(q, dtype=float).reshape(1, 2)
    if segment_distances(pt, v, np.roll(v, -1, axis=0)).min() <= tol:
        return "boundary"
    return "inside" if winding_numbers(pt, v)[0] != 0 else "outside"


def cloud_distance(A, B) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = np.asarray(B, dtype=float).reshape(-1, 2)
    if len(A) == 0 or len(B) == 0:
        raise ParameterError("cloud_distance needs two nonempty point sets")
    d_ab = cKDTree(B).query(A)[0].max()
    d_ba = cKDTree(A).query(B)[0].max()
    return float(max(d_ab, d_ba))


@dataclass(frozen=True)
class PlaneSimilarity:
    """Similarity with an arbitrary orthogonal part, ``p -> M p + shift``.

    Used where rotations are not multiples of 90 degrees, e.g. a fitted IFS.
    """

    matrix: np.ndarray = field(default_factory=lambda: np.eye(2))
    shift: np.ndarray = field(default_factory=lambda: np.zeros(2))

    @property
    def ratio(self) -> float:
        return float(np.sqrt(abs(np.linalg.det(self.matrix))))

    @property
    def is_reflection(self) -> bool:
        return bool(np.linalg.det(self.matrix) < 0)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        return pts @ np.asarray(self.matrix).T + np.asarray(self.shift)

    @classmethod
    def from_points(cls, p0, p1, q0, q1, reflect: bool = False) -> "PlaneSimilarity":
        """The similarity taking ``p0 -> q0`` and ``p1 -> q1``.

        Complex arithmetic: a direct similarity is ``z -> w z + c``, an
        opposite one ``z -> w conj(z) + c``.
        """
        z0, z1 = complex(*p0), complex(*p1)
        w0, w1 = complex(*q0), complex(*q1)
        if reflect:
            z0, z1 = z0.conjugate(), z1.conjugate()
        if abs(z1 - z0) == 0:
            raise DegenerateGeometryError("source points coincide")
        w = (w1 - w0) / (z1 - z0)
        c = w0 - w * z0
        m = np.array([[w.real, -w.imag], [w.imag, w.real]])
        if reflect:
            m = m @ np.diag([1.0, -1.0])
        return cls(m, np.array([c.real, c.imag]))

    @classmethod
    def from_map(cls, T: SimilarityMap) -> "PlaneSimilarity":
        return cls(T.matrix, np.asarray(T.shift))

    def scaled_about(self, center, factor: float) -> "PlaneSimilarity":
        """Shrink or grow the map's image about ``center`` (used for perturbation controls)."""
        c = np.asarray(center, dtype=float)
        return PlaneSimilarity(factor * np.asarray(self.matrix), factor * (np.asarray(self.shift) - c) + c)

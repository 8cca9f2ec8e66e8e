"""The rhombus gasket hierarchy.

Every empty polygon is stored as a placement (scale, D4 element, shift) of
one of two canonical templates drawn in a frame where the next rhombus to be
inserted is vertical (edge slopes ``±1/a``):

* the wedge ``[(0, 1), ((1+a²)/(2a), (1-a²)/2), (a, 0)]``, a right triangle
  with contacts at ``(0, 1)`` and ``(a, 0)``; this is literally the
  upper-right empty polygon after iteration 2;
* the dart ``[(-a, 0), (0, 1), (a, 0), (0, a²)]`` with contacts at
  ``(±a, 0)``, reflex vertex ``(0, a²)``; the darts of iteration 1 are this
  shape turned by 90 degrees and scaled by ``1/a``.

Placements whose D4 part swaps the axes turn the template's vertical rhombus
into a horizontal one, so the alternation of rhombus orientation with
iteration parity is carried by the placements and never tested explicitly.
Both templates have height 1 in their own frame; a polygon's height is the
scale of its placement.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvariantError, ParameterError, ResourceError
from .geom import D4, D4_MATRICES, D4_PRODUCT, SimilarityMap, signed_areas

#: Largest iteration index ``run_to``/``step`` will build (2**26 polygons).
MAX_ITERATION = 26
#: Contacts closer than this are the same contact.
CONTACT_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class AspectParam:
    """The aspect parameter ``a`` in (0, 1).

    Values extremely close to 1 should be built with :meth:`from_complement`
    so that ``log a`` and ``(1 - a²)/2`` keep full relative precision.
    """

    value: float
    complement: Optional[float] = None

    def __post_init__(self):
        if self.complement is not None:
            d = float(self.complement)
            if not (0.0 < d < 0.5):
                raise ParameterError(f"complement must lie in (0, 1/2), got {d!r}")
            object.__setattr__(self, "complement", d)
            object.__setattr__(self, "value", 1.0 - d)
        v = float(self.value)
        if not (0.0 < v < 1.0) or not math.isfinite(v):
            raise ParameterError(f"aspect parameter must lie in (0, 1), got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def from_complement(cls, delta: float) -> "AspectParam":
        return cls(1.0 - delta, complement=delta)

    @classmethod
    def coerce(cls, a: Union["AspectParam", float]) -> "AspectParam":
        return a if isinstance(a, AspectParam) else cls(a)

    @property
    def log(self) -> float:
        if self.complement is not None:
            return math.log1p(-self.complement)
        return math.log(self.value)

    @property
    def shrink(self) -> float:
        """``(1 - a²)/2``, the ratio of the two smaller pieces of a quadrant."""
        if self.complement is not None:
            d = self.complement
            return d * (2.0 - d) / 2.0
        a = self.value
        return (1.0 - a) * (1.0 + a) / 2.0

    @property
    def log_shrink(self) -> float:
        return math.log(self.shrink)

    def __float__(self) -> float:
        return self.value


AspectLike = Union[AspectParam, float]


class Kind(enum.IntEnum):
    WEDGE = 0
    DART = 1


class Phase(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class Rhombus:
    center: tuple[float, float]
    phase: Phase
    half_width: float
    half_height: float

    def vertices(self) -> np.ndarray:
        """Counterclockwise from the right vertex."""
        cx, cy = self.center
        w, h = self.half_width, self.half_height
        return np.array([[cx + w, cy], [cx, cy + h], [cx - w, cy], [cx, cy - h]])

    @property
    def area(self) -> float:
        return 2.0 * self.half_width * self.half_height


@dataclass(frozen=True)
class Templates:
    """Closed-form template data for one value of ``a``."""

    a: float
    shrink: float
    vertices: tuple[np.ndarray, np.ndarray]  # ccw, indexed by Kind
    contacts: tuple[np.ndarray, np.ndarray]  # (2, 2): template contact 0 and 1
    interior: tuple[np.ndarray, np.ndarray]  # one interior point per template
    rhombus_center: tuple[np.ndarray, np.ndarray]
    new_contact: tuple[np.ndarray, np.ndarray]
    # children[kind] = two entries (kind, scale, ortho, shift, reversed),
    # listed from template contact 0 to template contact 1.
    children: tuple[tuple, tuple]

    @property
    def rhombus_half_width(self) -> float:
        return self.a * self.shrink

    @property
    def rhombus_half_height(self) -> float:
        return self.shrink


def templates(a: AspectLike) -> Templates:
    p = AspectParam.coerce(a)
    a = p.value
    r = p.shrink
    wedge = np.array([[0.0, 1.0], [a, 0.0], [(1 + a * a) / (2 * a), r]])
    dart = np.array([[-a, 0.0], [0.0, a * a], [a, 0.0], [0.0, 1.0]])
    wedge_contacts = np.array([[0.0, 1.0], [a, 0.0]])
    dart_contacts = np.array([[-a, 0.0], [a, 0.0]])
    children = (
        (
            (Kind.WEDGE, a, D4.ANTISWAP, (a, 1.0), False),
            (Kind.DART, r / a, D4.ROT270, (a, r), False),
        ),
        (
            (Kind.WEDGE, a, D4.ROT90, (0.0, 0.0), False),
            (Kind.WEDGE, a, D4.SWAP, (0.0, 0.0), True),
        ),
    )
    return Templates(
        a=a,
        shrink=r,
        vertices=(wedge, dart),
        contacts=(wedge_contacts, dart_contacts),
        interior=(wedge.mean(axis=0), np.array([0.0, (1 + a * a) / 2])),
        rhombus_center=(np.array([a, r]), np.array([0.0, 1.0 - r])),
        new_contact=(np.array([a, 2 * r]), np.array([0.0, a * a])),
        children=children,
    )


@dataclass(frozen=True)
class EmptyPolygon:
    kind: Kind
    placement: SimilarityMap
    vertices: np.ndarray
    entry: tuple[float, float]
    exit: tuple[float, float]
    reversed: bool = False

    @property
    def phase(self) -> Phase:
        """Orientation of the rhombus this polygon receives next."""
        return Phase.HORIZONTAL if self.placement.ortho.swaps_axes else Phase.VERTICAL

    @property
    def height(self) -> float:
        return self.placement.scale


@dataclass(frozen=True)
class RhombusLayer:
    """All rhombi inserted at one iteration, as parallel arrays."""

    iteration: int
    centers: np.ndarray
    half_widths: np.ndarray
    half_heights: np.ndarray
    horizontal: np.ndarray  # bool

    def __len__(self) -> int:
        return len(self.centers)

    @property
    def areas(self) -> np.ndarray:
        return 2.0 * self.half_widths * self.half_heights

    def vertices(self) -> np.ndarray:
        """``(n, 4, 2)`` counterclockwise vertices."""
        c = self.centers
        w, h = self.half_widths, self.half_heights
        out = np.empty((len(c), 4, 2))
        out[:, 0] = c + np.stack([w, 0 * w], axis=1)
        out[:, 1] = c + np.stack([0 * h, h], axis=1)
        out[:, 2] = c - np.stack([w, 0 * w], axis=1)
        out[:, 3] = c - np.stack([0 * h, h], axis=1)
        return out

    def rhombus(self, i: int) -> Rhombus:
        return Rhombus(
            center=(float(self.centers[i, 0]), float(self.centers[i, 1])),
            phase=Phase.HORIZONTAL if self.horizontal[i] else Phase.VERTICAL,
            half_width=float(self.half_widths[i]),
            half_height=float(self.half_heights[i]),
        )


def _freeze(*arrays: np.ndarray) -> None:
    for arr in arrays:
        arr.setflags(write=False)


@dataclass(frozen=True, eq=False)
class GasketState:
    """Iteration ``k`` of the construction: ``2**k`` empty polygons in curve order.

    The curve starts at ``(0, 1)`` and runs counterclockwise, so polygon ``i``
    is entered at contact ``i`` and left at contact ``i + 1`` (cyclically).
    """

    a: AspectParam
    k: int
    kinds: np.ndarray  # int8, Kind per polygon
    scales: np.ndarray
    orthos: np.ndarray  # int8 index into D4
    shifts: np.ndarray  # (n, 2)
    reversed: np.ndarray  # bool: entry is the template's contact 1
    rhombi: tuple[RhombusLayer, ...]

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def templates(self) -> Templates:
        return templates(self.a)

    def _apply(self, local: np.ndarray, idx: Optional[np.ndarray] = None) -> np.ndarray:
        """Map template points ``local`` (n, m, 2) or (n, 2) through the placements."""
        sel = slice(None) if idx is None else idx
        m = D4_MATRICES[self.orthos[sel]] * self.scales[sel][:, None, None]
        if local.ndim == 2:
            return np.einsum("nij,nj->ni", m, local) + self.shifts[sel]
        return np.einsum("nij,nmj->nmi", m, local) + self.shifts[sel][:, None, :]

    @property
    def contacts(self) -> np.ndarray:
        """Entry contact of every polygon; the contact sequence in curve order."""
        t = self.templates
        local = np.empty((len(self), 2))
        for kind in Kind:
            sel = self.kinds == kind
            local[sel] = t.contacts[kind][self.reversed[sel].astype(int)]
        return self._apply(local)

    @property
    def exits(self) -> np.ndarray:
        t = self.templates
        local = np.empty((len(self), 2))
        for kind in Kind:
            sel = self.kinds == kind
            local[sel] = t.contacts[kind][1 - self.reversed[sel].astype(int)]
        return self._apply(local)

    @property
    def heights(self) -> np.ndarray:
        return self.scales

    @property
    def phases(self) -> np.ndarray:
        """True where the polygon receives a horizontal rhombus next."""
        return np.isin(self.orthos, [int(o) for o in D4 if o.swaps_axes])

    def census(self) -> dict[str, int]:
        n_dart = int(np.count_nonzero(self.kinds == Kind.DART))
        return {"wedges": len(self) - n_dart, "darts": n_dart}

    def vertices_of_kind(self, kind: Kind) -> tuple[np.ndarray, np.ndarray]:
        """Indices of polygons of ``kind`` and their ``(n, m, 2)`` ccw vertices."""
        idx = np.nonzero(self.kinds == kind)[0]
        tv = self.templates.vertices[kind]
        verts = self._apply(np.broadcast_to(tv, (len(idx),) + tv.shape), idx)
        flip = np.isin(self.orthos[idx], [4, 5, 6, 7])
        verts[flip] = verts[flip, ::-1]
        return idx, verts

    def polygon_vertices(self) -> list[np.ndarray]:
        out: list[np.ndarray] = [None] * len(self)  # type: ignore[list-item]
        for kind in Kind:
            idx, verts = self.vertices_of_kind(kind)
            for i, v in zip(idx, verts):
                out[i] = v
        return out

    def interior_points(self) -> np.ndarray:
        t = self.templates
        local = np.empty((len(self), 2))
        for kind in Kind:
            local[self.kinds == kind] = t.interior[kind]
        return self._apply(local)

    def polygon(self, i: int) -> EmptyPolygon:
        kind = Kind(int(self.kinds[i]))
        placement = SimilarityMap(float(self.scales[i]), D4(int(self.orthos[i])), tuple(self.shifts[i]))
        verts = placement(self.templates.vertices[kind])
        if placement.ortho.is_reflection:
            verts = verts[::-1]
        c = placement(self.templates.contacts[kind])
        rev = bool(self.reversed[i])
        entry, exit_ = (c[1], c[0]) if rev else (c[0], c[1])
        return EmptyPolygon(kind, placement, verts, tuple(map(float, entry)), tuple(map(float, exit_)), rev)

    @property
    def polygons(self) -> list[EmptyPolygon]:
        return [self.polygon(i) for i in range(len(self))]

    def iter_rhombi(self) -> Iterator[tuple[int, Rhombus]]:
        for layer in self.rhombi:
            for i in range(len(layer)):
                yield layer.iteration, layer.rhombus(i)

    def contact_registry(self, tol: float = CONTACT_MERGE_TOL) -> tuple[np.ndarray, np.ndarray]:
        """Deduplicated contacts and how many polygons reference each.

        Entries and exits are computed independently from the placements and
        merged when closer than ``tol``.
        """
        pts = np.concatenate([self.contacts, self.exits])
        tree = cKDTree(pts)
        groups = tree.query_ball_point(pts, r=tol)
        label = np.array([min(g) for g in groups])
        uniq, counts = np.unique(label, return_counts=True)
        return pts[uniq], counts


def _initial_rhombi(p: AspectParam) -> tuple[RhombusLayer, RhombusLayer]:
    a = p.value
    c = np.zeros((1, 2))
    outer = RhombusLayer(0, c.copy(), np.array([1.0 / a]), np.array([1.0]), np.array([True]))
    first = RhombusLayer(1, c.copy(), np.array([a]), np.array([1.0]), np.array([False]))
    for layer in (outer, first):
        _freeze(layer.centers, layer.half_widths, layer.half_heights, layer.horizontal)
    return outer, first


def initial_rhombus(a: AspectLike) -> Rhombus:
    return _initial_rhombi(AspectParam.coerce(a))[0].rhombus(0)


def new_state(a: AspectLike) -> GasketState:
    """Iteration 1: the outer horizontal rhombus split by the largest vertical one."""
    p = AspectParam.coerce(a)
    inv = 1.0 / p.value
    kinds = np.array([Kind.DART, Kind.DART], dtype=np.int8)
    scales = np.array([inv, inv])
    orthos = np.array([D4.ROT90, D4.ROT270], dtype=np.int8)
    shifts = np.zeros((2, 2))
    rev = np.array([True, True])
    _freeze(kinds, scales, orthos, shifts, rev)
    return GasketState(p, 1, kinds, scales, orthos, shifts, rev, _initial_rhombi(p))


def _inserted_rhombi(s: GasketState, iteration: int) -> RhombusLayer:
    t = s.templates
    local = np.empty((len(s), 2))
    for kind in Kind:
        local[s.kinds == kind] = t.rhombus_center[kind]
    centers = s._apply(local)
    horizontal = s.phases
    small = s.scales * t.rhombus_half_width
    large = s.scales * t.rhombus_half_height
    hw = np.where(horizontal, large, small)
    hh = np.where(horizontal, small, large)
    layer = RhombusLayer(iteration, centers, hw, hh, horizontal)
    _freeze(centers, hw, hh, horizontal)
    return layer


def step(s: GasketState, cap: int = MAX_ITERATION) -> GasketState:
    """Insert a rhombus into every empty polygon, doubling the polygon count."""
    if s.k + 1 > cap:
        raise ResourceError(f"iteration {s.k + 1} exceeds the cap of {cap}")
    t = s.templates
    n = len(s)
    # child tables indexed [kind, slot], slot in template order
    ckind = np.empty((2, 2), dtype=np.int8)
    cscale = np.empty((2, 2))
    cortho = np.empty((2, 2), dtype=np.int8)
    cshift = np.empty((2, 2, 2))
    crev = np.empty((2, 2), dtype=bool)
    for kind in Kind:
        for slot, (k2, sc, o, sh, rv) in enumerate(t.children[kind]):
            ckind[kind, slot], cscale[kind, slot], cortho[kind, slot] = k2, sc, o
            cshift[kind, slot], crev[kind, slot] = sh, rv

    # a reversed parent lists its children from template contact 1 to 0
    slots = np.where(s.reversed[:, None], [[1, 0]], [[0, 1]])
    pk = s.kinds[:, None].astype(int)
    kinds = ckind[pk, slots]
    scales = s.scales[:, None] * cscale[pk, slots]
    orthos = D4_PRODUCT[s.orthos[:, None], cortho[pk, slots]]
    m = D4_MATRICES[s.orthos] * s.scales[:, None, None]
    shifts = np.einsum("nij,nsj->nsi", m, cshift[pk, slots]) + s.shifts[:, None, :]
    rev = crev[pk, slots] ^ s.reversed[:, None]

    kinds = kinds.reshape(2 * n)
    scales = scales.reshape(2 * n)
    orthos = orthos.reshape(2 * n).astype(np.int8)
    shifts = shifts.reshape(2 * n, 2)
    rev = rev.reshape(2 * n)
    _freeze(kinds, scales, orthos, shifts, rev)
    layer = _inserted_rhombi(s, s.k + 1)
    return GasketState(s.a, s.k + 1, kinds, scales, orthos, shifts, rev, s.rhombi + (layer,))


def run_to(a: AspectLike, k: int, cap: int = MAX_ITERATION) -> GasketState:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ParameterError(f"iteration must be an integer >= 1, got {k!r}")
    if k > cap:
        raise ResourceError(f"iteration {k} exceeds the cap of {cap}")
    s = new_state(a)
    while s.k < k:
        s = step(s, cap)
    return s


def inscribe_rhombus(
    p: EmptyPolygon, a: AspectLike
) -> tuple[Rhombus, tuple[float, float], tuple[EmptyPolygon, EmptyPolygon]]:
    """Fill one empty polygon; children come back in curve order."""
    t = templates(a)
    expected = p.placement(t.vertices[p.kind])
    if p.placement.ortho.is_reflection:
        expected = expected[::-1]
    if expected.shape != p.vertices.shape or not np.allclose(expected, p.vertices, atol=1e-9 * max(1.0, p.height)):
        raise InvariantError("polygon does not match its template for this aspect parameter")

    T = p.placement
    cx, cy = T(t.rhombus_center[p.kind])
    small = T.scale * t.rhombus_half_width
    large = T.scale * t.rhombus_half_height
    if p.phase is Phase.HORIZONTAL:
        rh = Rhombus((float(cx), float(cy)), Phase.HORIZONTAL, large, small)
    else:
        rh = Rhombus((float(cx), float(cy)), Phase.VERTICAL, small, large)
    new = T(t.new_contact[p.kind])
    new_pt = (float(new[0]), float(new[1]))

    kids = []
    for kind, sc, o, sh, rv in t.children[p.kind]:
        placement = T.compose(SimilarityMap(sc, o, sh))
        verts = placement(t.vertices[kind])
        if placement.ortho.is_reflection:
            verts = verts[::-1]
        c = placement(t.contacts[kind])
        child_rev = rv ^ p.reversed
        entry, exit_ = (c[1], c[0]) if child_rev else (c[0], c[1])
        kids.append(
            EmptyPolygon(kind, placement, verts, tuple(map(float, entry)), tuple(map(float, exit_)), child_rev)
        )
    if p.reversed:
        kids.reverse()
    return rh, new_pt, (kids[0], kids[1])


def union_area(s: GasketState) -> float:
    """Total area of the empty polygons at iteration ``s.k``."""
    total = 0.0
    for kind in Kind:
        _, verts = s.vertices_of_kind(kind)
        total += float(np.abs(signed_areas(verts)).sum())
    return total


def rhombi_area_sum(s: GasketState) -> float:
    """Area of every rhombus inserted through iteration ``s.k`` (outer one excluded)."""
    return float(sum(layer.areas.sum() for layer in s.rhombi if layer.iteration >= 1))


def outer_area(a: AspectLike) -> float:
    return 2.0 / AspectParam.coerce(a).value

"""Deterministic SVG, CSV and JSON output.

Every emitter returns text with LF newlines and no timestamps, so identical
input gives identical bytes.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .substitution import GasketState, Kind

SVG_DECIMALS = 9


@dataclass
class Layer:
    """One group of shapes sharing a style.

    ``kind`` is ``"polygons"`` (filled closed shapes), ``"polyline"`` (one
    open or closed path) or ``"points"`` (dots of radius ``point_radius``).
    """

    name: str
    kind: str
    shapes: list[np.ndarray]
    fill: str = "none"
    stroke: str = "none"
    closed: bool = True
    point_radius: float = 0.005


@dataclass
class Scene:
    layers: list[Layer] = field(default_factory=list)
    viewport: tuple[float, float, float, float] | None = None  # xmin, ymin, xmax, ymax
    width_px: int = 800

    def bounds(self) -> tuple[float, float, float, float]:
        if self.viewport is not None:
            return self.viewport
        pts = np.concatenate([np.asarray(s, dtype=float).reshape(-1, 2) for l in self.layers for s in l.shapes])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        pad = 0.02 * float(max(hi - lo))
        return (lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad)


def _num(v: float) -> str:
    s = f"{v:.{SVG_DECIMALS}f}"
    return "0.000000000" if s == "-0.000000000" else s


def _pts(arr) -> str:
    return " ".join(f"{_num(x)},{_num(y)}" for x, y in np.asarray(arr, dtype=float).reshape(-1, 2))


def emit_svg(scene: Scene) -> str:
    if not scene.layers or not any(len(l.shapes) for l in scene.layers):
        raise ParameterError("cannot render an empty scene")
    xmin, ymin, xmax, ymax = scene.bounds()
    w, h = xmax - xmin, ymax - ymin
    if not (w > 0 and h > 0):
        raise ParameterError("viewport must have positive width and height")
    height_px = max(1, int(round(scene.width_px * h / w)))
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{scene.width_px}" height="{height_px}" '
        f'viewBox="{_num(xmin)} {_num(-ymax)} {_num(w)} {_num(h)}">',
        # geometry is in math orientation; flip y once here
        '<g transform="scale(1,-1)">',
    ]
    for layer in scene.layers:
        out.append(
            f'<g class="{layer.name}" fill="{layer.fill}" stroke="{layer.stroke}" '
            'stroke-width="1" vector-effect="non-scaling-stroke">'
        )
        for shape in layer.shapes:
            if layer.kind == "polygons":
                out.append(f'<polygon points="{_pts(shape)}"/>')
            elif layer.kind == "polyline":
                tag = "polygon" if layer.closed else "polyline"
                out.append(f'<{tag} points="{_pts(shape)}" vector-effect="non-scaling-stroke"/>')
            elif layer.kind == "points":
                for x, y in np.asarray(shape, dtype=float).reshape(-1, 2):
                    out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(layer.point_radius)}"/>')
            else:
                raise ParameterError(f"unknown layer kind {layer.kind!r}")
        out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def emit_csv(header: Sequence[str], rows: Iterable[Sequence[Any]] = ()) -> str:
    """Header line plus one line per row; floats in shortest round-trip form."""
    header = list(header)
    if not header:
        raise ParameterError("csv header must not be empty")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != len(header):
            raise ParameterError(f"row {i} has {len(row)} fields, header has {len(header)}")
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def to_jsonable(obj: Any) -> Any:
    """Plain JSON-ready data; reports with a ``passed`` property keep it as a key."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        d = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        if isinstance(getattr(type(obj), "passed", None), property):
            d["passed"] = bool(obj.passed)
        return d
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, enum.Enum):
        return obj.name.lower() if isinstance(obj, enum.IntEnum) else obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise ParameterError("reports must not contain non-finite numbers")
        return v
    return obj


def emit_json(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def gasket_scene(s: GasketState, rhombi: bool = True) -> Scene:
    """Rhombi (outer one first) under the empty polygons of iteration ``s.k``."""
    layers = []
    if rhombi:
        for layer in s.rhombi:
            name = "outer-rhombus" if layer.iteration == 0 else f"rhombi-{layer.iteration}"
            fill = "#ffffff" if layer.iteration == 0 else "#d9d9d9"
            layers.append(Layer(name, "polygons", list(layer.vertices()), fill=fill, stroke="#000000"))
    for kind in Kind:
        polys = [v for v, kk in zip(s.polygon_vertices(), s.kinds) if kk == kind]
        if polys:
            color = "#3b6ea5" if kind == Kind.WEDGE else "#c0504d"
            layers.append(Layer(f"{kind.name.lower()}s", "polygons", polys, fill=color, stroke="none"))
    return Scene(layers)


def curve_scene(points: np.ndarray, closed: bool = True) -> Scene:
    return Scene([Layer("curve", "polyline", [np.asarray(points)], stroke="#000000", closed=closed)])


def cloud_scene(points: np.ndarray, radius: float = 0.003) -> Scene:
    return Scene([Layer("cloud", "points", [np.asarray(points)], fill="#000000", point_radius=radius)])


def profile_scene(rows: Sequence[tuple[float, float]]) -> Scene:
    """Dimension against ``a``, drawn in data coordinates with the unit square of a."""
    arr = np.asarray(rows, dtype=float)
    frame = np.array([[0.0, 1.0], [1.0, 1.0], [1.0, 1.3], [0.0, 1.3]])
    return Scene(
        [
            Layer("frame", "polyline", [frame], stroke="#999999"),
            Layer("dimension", "polyline", [arr], stroke="#000000", closed=False),
        ],
        viewport=(-0.05, 0.98, 1.05, 1.32),
    )

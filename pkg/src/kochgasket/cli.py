"""Command-line interface: ``kochgasket <subcommand> [options]``.

Exit codes: 0 success, 2 bad parameters or usage, 3 resource cap hit,
4 a verification ran and reported a failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import analysis, curve, ifs, koch, render
from .errors import ParameterError, ResourceError
from .substitution import AspectParam, Kind, rhombi_area_sum, run_to, union_area

EXIT_OK, EXIT_PARAM, EXIT_RESOURCE, EXIT_FAILED = 0, 2, 3, 4

DEFAULT_A = 1.0 / math.sqrt(3.0)
DEFAULT_K = 8
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    a: AspectParam
    k: int
    tol: float
    out: Optional[str]
    format: str
    seed: int
    threads: int
    extra: dict


@dataclass
class Outcome:
    text: str
    passed: Optional[bool] = None


# name -> (formats, default format, k default, tol default, help)
_COMMANDS: dict[str, tuple[tuple[str, ...], str, Optional[int], Optional[float], str]] = {
    "iterate": (("svg", "json", "csv"), "svg", DEFAULT_K, None, "build iteration k and draw it"),
    "curve": (("csv", "json", "svg"), "csv", None, DEFAULT_TOL, "evaluate the limit curve at t = i/n"),
    "contacts": (("csv", "json", "svg"), "csv", DEFAULT_K, None, "contact points of iteration k in curve order"),
    "dim": (("json", "csv"), "json", None, None, "Hausdorff dimension from the Moran equation"),
    "dim-plot": (("csv", "svg", "json"), "csv", None, None, "dimension as a function of a"),
    "dim-max-check": (("json",), "json", None, None, "check the dimension peaks at a = 1/sqrt(3)"),
    "area": (("json", "csv"), "json", None, None, "closed-form enclosed area"),
    "area-empirical": (("json",), "json", 14, None, "shoelace area of iteration k against the closed form"),
    "boxdim": (("json",), "json", 16, None, "box-counting slope of the iteration-k contacts"),
    "koch-compare": (("json",), "json", 3, DEFAULT_TOL, "gasket iteration 2k against snowflake level k"),
    "ifs-verify": (("json",), "json", 16, 1e-3, "three-map self-similarity and open set checks"),
    "simple-check": (("json",), "json", DEFAULT_K, 1e-12, "finite-depth Jordan check at iteration k"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--a", type=float, default=None, help="aspect parameter in (0, 1); default 1/sqrt(3)")
    g.add_argument("--a-complement", type=float, default=None, metavar="DELTA",
                   help="give a as 1 - DELTA, for a very close to 1")
    common.add_argument("--k", type=int, default=None, help="iteration (or snowflake level for koch-compare)")
    common.add_argument("--tol", type=float, default=None, help="tolerance")
    common.add_argument("--out", default=None, help="write here instead of stdout")
    common.add_argument("--format", default=None, help="svg, csv or json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="kochgasket",
        description="Rhombus gasket curves: construction, dimension, area and checks.",
        epilog="Defaults: a = 1/sqrt(3), k = 8, tol = 1e-9 unless a subcommand says otherwise.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name, (formats, fmt, k, tol, text) in _COMMANDS.items():
        epilog = f"formats: {', '.join(formats)} (default {fmt})"
        if k is not None:
            epilog += f"; default k = {k}"
        if tol is not None:
            epilog += f"; default tol = {tol:g}"
        p = sub.add_parser(name, parents=[common], help=text, description=text, epilog=epilog)
        if name == "curve":
            p.add_argument("--samples", type=int, default=64, help="number of parameter values")
        if name == "dim-plot":
            p.add_argument("--a-min", type=float, default=0.005)
            p.add_argument("--a-max", type=float, default=0.995)
            p.add_argument("--n", type=int, default=199)
        if name == "dim-max-check":
            p.add_argument("--h", type=float, default=1e-5, help="finite-difference step")
        if name == "boxdim":
            p.add_argument("--levels", type=int, default=10)
        if name == "ifs-verify":
            p.add_argument("--samples", type=int, default=10_000, help="open set sample count")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    formats, fmt, k_default, tol_default, _ = _COMMANDS[ns.subcommand]
    if ns.a_complement is not None:
        a = AspectParam.from_complement(ns.a_complement)
    else:
        a = AspectParam(DEFAULT_A if ns.a is None else ns.a)
    fmt = ns.format or fmt
    if fmt not in formats:
        raise ParameterError(f"{ns.subcommand} writes {', '.join(formats)}, not {fmt!r}")
    tol = ns.tol if ns.tol is not None else (tol_default if tol_default is not None else DEFAULT_TOL)
    if not (tol > 0 and math.isfinite(tol)):
        raise ParameterError("tol must be positive")
    if ns.threads < 1:
        raise ParameterError("threads must be >= 1")
    base = {"subcommand", "a", "a_complement", "k", "tol", "out", "format", "seed", "threads"}
    extra = {k: v for k, v in vars(ns).items() if k not in base}
    return RunConfig(
        subcommand=ns.subcommand,
        a=a,
        k=ns.k if ns.k is not None else (k_default if k_default is not None else DEFAULT_K),
        tol=tol,
        out=ns.out,
        format=fmt,
        seed=ns.seed,
        threads=ns.threads,
        extra=extra,
    )


def _iterate(cfg: RunConfig) -> Outcome:
    s = run_to(cfg.a, cfg.k)
    if cfg.format == "svg":
        return Outcome(render.emit_svg(render.gasket_scene(s)))
    if cfg.format == "csv":
        rows = [
            (i, Kind(kd).name.lower(), h, e[0], e[1])
            for i, (kd, h, e) in enumerate(zip(s.kinds, s.heights, s.contacts))
        ]
        return Outcome(render.emit_csv(["index", "kind", "height", "entry_x", "entry_y"], rows))
    return Outcome(render.emit_json({
        "a": s.a.value,
        "k": s.k,
        "n_polygons": len(s),
        "census": s.census(),
        "union_area": union_area(s),
        "rhombi_area_sum": rhombi_area_sum(s),
    }))


def _curve(cfg: RunConfig) -> Outcome:
    n = cfg.extra["samples"]
    if n < 1:
        raise ParameterError("samples must be >= 1")
    ts = [i / n for i in range(n + 1)]

    def point(t):
        return curve.eval_curve(cfg.a, t, tol=cfg.tol)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            pts = list(pool.map(point, ts))
    else:
        pts = [point(t) for t in ts]
    if cfg.format == "svg":
        return Outcome(render.emit_svg(render.curve_scene(np.array(pts[:-1]))))
    if cfg.format == "csv":
        return Outcome(render.emit_csv(["t", "x", "y"], [(t, x, y) for t, (x, y) in zip(ts, pts)]))
    return Outcome(render.emit_json({"a": cfg.a.value, "tol": cfg.tol, "t": ts, "points": pts}))


def _contacts(cfg: RunConfig) -> Outcome:
    c = run_to(cfg.a, cfg.k).contacts
    if cfg.format == "svg":
        return Outcome(render.emit_svg(render.curve_scene(c)))
    if cfg.format == "csv":
        return Outcome(render.emit_csv(["index", "x", "y"], [(i, x, y) for i, (x, y) in enumerate(c)]))
    return Outcome(render.emit_json({"a": cfg.a.value, "k": cfg.k, "contacts": c}))


def _dim(cfg: RunConfig) -> Outcome:
    rep = analysis.dimension(cfg.a)
    if cfg.format == "csv":
        return Outcome(render.emit_csv(["a", "dimension", "residual"], [(rep.a, rep.s, rep.residual)]))
    return Outcome(render.emit_json(rep))


def _dim_plot(cfg: RunConfig) -> Outcome:
    x = cfg.extra
    rows = analysis.dimension_profile(x["a_min"], x["a_max"], x["n"], threads=cfg.threads)
    if cfg.format == "svg":
        return Outcome(render.emit_svg(render.profile_scene(rows)))
    if cfg.format == "csv":
        return Outcome(render.emit_csv(["a", "dimension"], rows))
    return Outcome(render.emit_json({"profile": rows}))


def _dim_max_check(cfg: RunConfig) -> Outcome:
    rep = analysis.verify_max_at_koch(cfg.extra["h"])
    return Outcome(render.emit_json(rep), rep.passed)


def _area(cfg: RunConfig) -> Outcome:
    area = analysis.area_closed_form(cfg.a)
    x = analysis.shaded_x(cfg.a)
    if cfg.format == "csv":
        return Outcome(render.emit_csv(["a", "area", "shaded_x"], [(cfg.a.value, area, x)]))
    return Outcome(render.emit_json({"a": cfg.a.value, "area": area, "shaded_x": x}))


def _area_empirical(cfg: RunConfig) -> Outcome:
    s = run_to(cfg.a, cfg.k)
    emp = analysis.empirical_area(s)
    gap, bound = analysis.empirical_area_gap(s)
    exact = analysis.area_closed_form(cfg.a)
    ok = gap <= bound
    return Outcome(render.emit_json({
        "a": cfg.a.value, "k": cfg.k, "empirical": emp, "closed_form": exact,
        "gap": gap, "relative_gap": gap / exact, "union_area": bound, "passed": ok,
    }), ok)


def _boxdim(cfg: RunConfig) -> Outcome:
    rep = analysis.box_counting(run_to(cfg.a, cfg.k).contacts, levels=cfg.extra["levels"])
    exact = analysis.dimension(cfg.a).s
    return Outcome(render.emit_json({
        "a": cfg.a.value, "k": cfg.k, "fit": rep, "analytic": exact, "difference": rep.slope - exact,
    }))


def _koch_compare(cfg: RunConfig) -> Outcome:
    rep = koch.verify_equivalence(cfg.k, tol=cfg.tol, a=cfg.a)
    return Outcome(render.emit_json(rep), rep.passed)


def _ifs_verify(cfg: RunConfig) -> Outcome:
    system = ifs.quadrant_system(cfg.a)
    sim = ifs.verify_self_similarity(system, run_to(cfg.a, cfg.k), tol=cfg.tol)
    osc = ifs.verify_open_set(system, n_samples=cfg.extra["samples"], seed=cfg.seed)
    inv = ifs.system_invariants(system)
    ok = sim.passed and osc.passed and all(inv.values())
    return Outcome(render.emit_json({
        "a": cfg.a.value,
        "ratios": system.ratios,
        "points": system.points,
        "invariants": inv,
        "self_similarity": sim,
        "open_set": osc,
        "moran_dimension": ifs.moran_dimension(system.ratios),
        "passed": ok,
    }), ok)


def _simple_check(cfg: RunConfig) -> Outcome:
    rep = curve.check_simple(run_to(cfg.a, cfg.k), tol=cfg.tol, threads=cfg.threads)
    return Outcome(render.emit_json(rep), rep.passed)


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "iterate": _iterate,
    "curve": _curve,
    "contacts": _contacts,
    "dim": _dim,
    "dim-plot": _dim_plot,
    "dim-max-check": _dim_max_check,
    "area": _area,
    "area-empirical": _area_empirical,
    "boxdim": _boxdim,
    "koch-compare": _koch_compare,
    "ifs-verify": _ifs_verify,
    "simple-check": _simple_check,
}


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed usage
        return EXIT_OK if e.code in (0, None) else EXIT_PARAM
    try:
        cfg = make_config(ns)
        outcome = HANDLERS[cfg.subcommand](cfg)
    except ParameterError as e:
        print(f"kochgasket: error: {e}", file=sys.stderr)
        return EXIT_PARAM
    except ResourceError as e:
        print(f"kochgasket: resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(outcome.text)
    else:
        sys.stdout.write(outcome.text)
    return EXIT_FAILED if outcome.passed is False else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

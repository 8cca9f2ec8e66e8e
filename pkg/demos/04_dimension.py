"""Hausdorff dimension as a function of a.

Each quadrant of the curve is made of three copies of itself, scaled by a,
(1-a^2)/2 and (1-a^2)/2, so its dimension solves the Moran equation
a^s + 2((1-a^2)/2)^s = 1. The classical snowflake is the peak.
"""
import math
from pathlib import Path

from kochgasket.analysis import dimension, dimension_profile, verify_max_at_koch
from kochgasket.render import emit_csv, emit_svg, profile_scene
from kochgasket.substitution import AspectParam

rep = dimension(1 / math.sqrt(3))
print(f"a = 1/sqrt(3): s = {rep.s!r} (log_3 4 = {math.log(4) / math.log(3)!r})")
print(verify_max_at_koch())

# near a = 1 the parameter must be given by its distance to 1
print("a = 1 - 1e-16:", dimension(AspectParam.from_complement(1e-16)).s)

rows = dimension_profile(0.005, 0.995, 199)
best = max(rows, key=lambda r: r[1])
print(f"largest sampled dimension {best[1]:.6f} at a = {best[0]:.4f}")

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)
(OUT / "dimension.csv").write_text(emit_csv(["a", "dimension"], rows), newline="\n")
(OUT / "dimension.svg").write_text(emit_svg(profile_scene(rows)), newline="\n")

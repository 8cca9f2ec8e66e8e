"""At a = 1/sqrt(3) the gasket curve is the Koch snowflake.

Put an equilateral triangle of circumradius 1 with a vertex at the top
contact (0, 1). After 2k iterations the 4^k contacts are exactly every
third vertex of the level-k snowflake, in order.
"""
from kochgasket.koch import snowflake, gasket_alignment, verify_equivalence
from kochgasket.render import Layer, Scene, emit_svg
from kochgasket.substitution import run_to
from pathlib import Path

for k in range(1, 6):
    rep = verify_equivalence(k)
    print(f"level {k}: {rep.n_contacts:5d} contacts, worst mismatch {rep.max_mismatch:.1e}, "
          f"in order {rep.in_order}, pass {rep.passed}")

print("a = 0.5 instead:", verify_equivalence(3, a=0.5).passed)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)
flake = snowflake(gasket_alignment(), 3).vertices
scene = Scene([
    Layer("snowflake", "polyline", [flake], stroke="#999999"),
    Layer("contacts", "points", [run_to(3 ** -0.5, 6).contacts], fill="#c0504d", point_radius=0.01),
])
(OUT / "koch_overlay.svg").write_text(emit_svg(scene), newline="\n")

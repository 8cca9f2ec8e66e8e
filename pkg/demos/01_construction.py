"""Building the gasket.

Start from a horizontal rhombus, cut out the largest vertical rhombus, then
keep filling every empty polygon with the largest rhombus of the other
orientation. Only two shapes of empty polygon ever appear (wedges and
darts), so each iteration is a table lookup per polygon.
"""
from pathlib import Path

from kochgasket.render import emit_svg, gasket_scene
from kochgasket.substitution import outer_area, rhombi_area_sum, run_to, union_area

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

a = 0.5
for k in (1, 2, 3, 4, 6, 8):
    s = run_to(a, k)
    print(f"iteration {k:2d}: {len(s):4d} polygons {s.census()}  "
          f"empty area {union_area(s):.5f}  rhombi {rhombi_area_sum(s):.5f}")
    (OUT / f"gasket_a05_k{k}.svg").write_text(emit_svg(gasket_scene(s)), newline="\n")

# the rhombi and the empty polygons always tile the outer rhombus
s = run_to(a, 10)
print("outer rhombus area", outer_area(a), "=", union_area(s) + rhombi_area_sum(s))

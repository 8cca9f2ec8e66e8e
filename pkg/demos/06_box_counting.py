"""Box counting as an independent estimate of the dimension.

Count occupied dyadic cells for a deep contact cloud and fit log N against
log(1/eps). The fit lands within a few hundredths of the Moran value.
"""
from kochgasket.analysis import box_counting, dimension
from kochgasket.substitution import run_to

for a in (0.4, 3 ** -0.5, 0.75):
    rep = box_counting(run_to(a, 20).contacts)
    print(f"a={a:.4f}: box counting {rep.slope:.4f} (r^2 {rep.r_squared:.5f}), Moran {dimension(a).s:.4f}")

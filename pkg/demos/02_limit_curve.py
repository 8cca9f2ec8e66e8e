"""The limit curve f(a, t).

Parameter t in [i/2^k, (i+1)/2^k] is spent inside empty polygon i of
iteration k, so evaluating f(a, t) means following one branch of the
hierarchy until the polygon is smaller than the requested tolerance.
"""
import math

from kochgasket.curve import check_simple, convergence_bound, eval_curve, refinement_gap
from kochgasket.substitution import run_to

a = 1 / math.sqrt(3)
for t in (0.0, 0.125, 0.3, 1 / 3, 0.5, 0.9):
    x, y = eval_curve(a, t, tol=1e-10)
    print(f"f({t:.4f}) = ({x:+.10f}, {y:+.10f})")

# successive polylines through the contacts converge geometrically
for k in range(2, 8):
    gap = refinement_gap(run_to(a, 2 * k), run_to(a, 2 * k + 2))
    print(f"iteration {2 * k:2d} -> {2 * k + 2:2d}: gap {gap:.2e}  bound {convergence_bound(a, k):.2e}")

# at any finite depth the polygons only touch their two neighbours
print(check_simple(run_to(a, 10)).passed)

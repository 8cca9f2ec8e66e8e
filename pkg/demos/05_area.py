"""Enclosed area.

The closed form 8a/(1 + 4a^2 - a^4) comes from an area balance on one
quadrant. The polygon through the iteration-k contacts approaches it, and
the error is never larger than the total area of the empty polygons.
"""
import math

from kochgasket.analysis import area_closed_form, empirical_area_gap
from kochgasket.substitution import run_to

a = 1 / math.sqrt(3)
print("closed form at the Koch point:", area_closed_form(a), " snowflake:", 6 * math.sqrt(3) / 5)

for a in (0.3, 0.5, 0.8):
    for k in (6, 10, 14):
        gap, bound = empirical_area_gap(run_to(a, k))
        print(f"a={a}  k={k:2d}  |error| {gap:.2e}  <= empty area {bound:.2e}")

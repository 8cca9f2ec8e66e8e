"""Three similarities generate one quadrant of the curve.

The quadrant arc from A = (a, 0) to C = (0, 1) splits at two deeper
contacts into arcs similar to the whole. The three maps are recovered from
the construction, then checked: ratios, self-similarity of the contact
cloud, and the open set condition with the triangle ABC.
"""
from kochgasket.ifs import (
    attractor,
    moran_dimension,
    quadrant_contacts,
    quadrant_system,
    verify_open_set,
    verify_self_similarity,
)
from kochgasket.geom import cloud_distance
from kochgasket.substitution import run_to

a = 0.5
sys_ = quadrant_system(a)
for name, p in sorted(sys_.points.items()):
    print(f"{name} = ({p[0]:.6f}, {p[1]:.6f})")
print("ratios", sys_.ratios, "reflections", [m.is_reflection for m in sys_.maps])
print("Moran dimension of the ratios:", moran_dimension(sys_.ratios))

s = run_to(a, 16)
print(verify_self_similarity(sys_, s))
print("open set:", verify_open_set(sys_).passed)

cloud = attractor(sys_, 9)
print("attractor vs contacts:", cloud_distance(cloud.points, quadrant_contacts(run_to(a, 20))))

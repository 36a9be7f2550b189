"""Certified gain-ratio synthesis for triangle formations.

For each ordinary follower the ratio beta/alpha must be large enough that
the only stationary point of its potential is the desired apex.  Isosceles
triangles admit a closed-form bound; scalene ones go through the quartic
discriminant machinery.  The script prints both branches and then scans a
scalene triangle to show the certified region agreeing with a brute-force
root check.
"""

import numpy as np

from formctl import (
    FormationSpec,
    build_lff,
    desired_area_from_distances,
    has_real_root,
    isosceles_gain_bound,
    recommended_schedule,
    stationary_points,
    stationary_quartic,
)
from formctl.gains import gain_ratio_lower_bound

# -- closed-form isosceles bound ------------------------------------------
print("isosceles bounds (base, leg) -> (d_kj^2 - d_ji^2/4) / d_ji^2")
for base, leg in [(2.0, 2.0), (2.0, 1.2), (1.0, 3.0)]:
    print(f"  base={base}, leg={leg}: bound {isosceles_gain_bound(base, leg):.4f}")

# -- certified scalene bound ----------------------------------------------
d1, d2, d3 = 2.0, 2.2, 1.9
bound = gain_ratio_lower_bound(d1, d2, d3)
print(f"\nscalene ({d1}, {d2}, {d3}): certified ratio bound {bound:.6f}")

s_star = desired_area_from_distances(d1, d2, d3, +1)
print("ratio   quartic has real root   stationary points")
for ratio in [0.5, 2.5, 5.0, bound * 1.01, bound * 2]:
    n_pts = len(stationary_points(d1, d2, d3, s_star, ratio))
    root = has_real_root(stationary_quartic(d1, d2, d3, ratio))
    print(f"{ratio:6.3f}   {str(root):>20}   {n_pts}")

# -- whole-formation schedule ---------------------------------------------
graph = build_lff(4, [(1, 2), (2, 3)])
spec = FormationSpec.from_coordinates(
    graph, np.array([(0, 0), (2, 0), (0.9, 1.8), (2.6, 2.0)])
)
schedule = recommended_schedule(spec, alpha=1.0, margin=0.1)
print("\nrecommended schedule (alpha = 1, margin 10%):")
for info in schedule.table:
    print(f"  triangle {info.triangle}: branch {info.branch}, bound {info.bound:.4f},"
          f" beta_{info.triangle[2]} = {schedule.betas[info.triangle[2]]:.4f}")

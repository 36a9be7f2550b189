"""Build a leader-first-follower formation graph and inspect its rigidity.

Walks through the basic objects: the directed graph built by repeated
vertex insertion, the structural validity report, the triangle list, and
the rank of the rigidity matrix at generic vs. degenerate embeddings.
"""

import numpy as np

from formctl import (
    Framework,
    build_lff,
    is_infinitesimally_rigid,
    rigidity_matrix,
    rigidity_rank,
    triangles_of,
    validate_conditions,
)

# a 5-agent chain of triangles: each new vertex watches the previous two
graph = build_lff(5, [(1, 2), (2, 3), (3, 4)])
print("edges (follower -> target):", graph.edges)

report = validate_conditions(graph)
print("structurally valid:", report.passed)
print("triangles:", triangles_of(graph))

# a generic embedding is infinitesimally rigid: rank(R) = 2n - 3
s3 = np.sqrt(3.0)
desired = np.array([(0, 0), (2, 0), (1, s3), (3, s3), (2, 2 * s3)], dtype=float)
f = Framework(graph, desired)
R = rigidity_matrix(f)
print(f"\nrigidity matrix: {R.shape[0]} x {R.shape[1]}, rank {rigidity_rank(f)}"
      f" (2n-3 = {2 * graph.n - 3})")
print("infinitesimally rigid:", is_infinitesimally_rigid(f))

# squash everything onto a line and the rank drops: a flex appears
flat = Framework(graph, np.column_stack([np.arange(5.0), np.zeros(5)]))
print("collinear embedding rank:", rigidity_rank(flat),
      "-> rigid:", is_infinitesimally_rigid(flat))

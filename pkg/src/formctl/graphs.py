"""Leader-first-follower (LFF) directed formation graphs and rigidity tests.

An LFF graph on vertices 1..n has out-degrees out(1)=0, out(2)=1,
out(k)=2 for k >= 3, every edge directed from the higher label to the
lower one, and exactly 2n-3 edges.  Such graphs are built by repeatedly
attaching a new vertex with two outgoing edges to two existing vertices
(type-I insertion), which makes them minimally persistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError

RANK_TOL = 1e-9  # singular values below RANK_TOL * sigma_max count as zero


@dataclass(frozen=True)
class DirectedFormationGraph:
    """Immutable directed graph; vertices are labeled 1..n externally.

    ``edges`` is an ordered tuple of (source, sink) pairs, meaning the
    source agent measures its relative position to the sink agent.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise SpecError(f"need at least 2 vertices, got n={self.n}")
        seen = set()
        for j, i in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise SpecError(f"edge ({j},{i}) references vertex outside 1..{self.n}")
            if i == j:
                raise SpecError(f"self-loop at vertex {i}")
            if (j, i) in seen:
                raise SpecError(f"duplicate edge ({j},{i})")
            seen.add((j, i))
        object.__setattr__(self, "edges", tuple(self.edges))

    def out_degree(self, v: int) -> int:
        return sum(1 for j, _ in self.edges if j == v)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        """Sinks of v's out-edges, in ascending order."""
        return tuple(sorted(i for j, i in self.edges if j == v))


@dataclass(frozen=True)
class Framework:
    """A graph together with a concrete planar embedding of its vertices."""

    graph: DirectedFormationGraph
    positions: np.ndarray  # (n, 2)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.shape != (self.graph.n, 2):
            raise SpecError(
                f"positions shape {pos.shape} does not match n={self.graph.n}"
            )
        if not np.all(np.isfinite(pos)):
            raise SpecError("positions must be finite")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[str, ...] = field(default_factory=tuple)


def build_lff(n: int, attachments: list[tuple[int, int]]) -> DirectedFormationGraph:
    """Build an LFF graph by successive two-edge vertex insertions.

    ``attachments[k-3]`` gives the pair (i, j), i < j < k, that vertex k
    attaches to.  The base graph on vertices {1, 2} has the single edge
    (2, 1).
    """
    if n < 2:
        raise SpecError(f"need at least 2 vertices, got n={n}")
    if len(attachments) != max(n - 2, 0):
        raise SpecError(
            f"expected {max(n - 2, 0)} attachment pairs for n={n}, got {len(attachments)}"
        )
    edges = [(2, 1)]
    for k, (i, j) in enumerate(attachments, start=3):
        if i == j:
            raise SpecError(f"vertex {k}: attachment vertices must be distinct")
        if not (1 <= i < j < k):
            raise SpecError(
                f"vertex {k}: attachment ({i},{j}) must satisfy 1 <= i < j < {k}"
            )
        edges.append((k, i))
        edges.append((k, j))
    return DirectedFormationGraph(n=n, edges=tuple(edges))


def validate_conditions(g: DirectedFormationGraph) -> ValidationReport:
    """Check the LFF out-degree pattern, edge directions, and edge count."""
    violations = []
    expected = {1: 0, 2: 1}
    for v in range(1, g.n + 1):
        want = expected.get(v, 2)
        got = g.out_degree(v)
        if got != want:
            violations.append(f"out-degree condition: out({v})={got}, expected {want}")
    for j, i in g.edges:
        if not j > i:
            violations.append(
                f"direction condition: edge ({j},{i}) must point from higher to lower label"
            )
    a = len(g.edges)
    if a != 2 * g.n - 3:
        violations.append(f"edge count: a={a}, expected 2n-3={2 * g.n - 3}")
    return ValidationReport(passed=not violations, violations=tuple(violations))


def triangles_of(g: DirectedFormationGraph) -> tuple[tuple[int, int, int], ...]:
    """One triangle (i, j, k), i < j, per vertex k >= 3, from k's out-edges.

    Ordered by increasing k; the leader pair edge (2, 1) spans no triangle.
    """
    report = validate_conditions(g)
    if not report.passed:
        raise SpecError("invalid LFF graph: " + "; ".join(report.violations))
    tris = []
    for k in range(3, g.n + 1):
        i, j = g.out_neighbors(k)
        tris.append((i, j, k))
    return tuple(tris)


def rigidity_matrix(f: Framework) -> np.ndarray:
    """Half-gradient of the squared-edge-length map, shape (a, 2n).

    The row of edge (j, i) carries (p_j - p_i)^T in the columns of vertex
    j and its negation in the columns of vertex i.
    """
    g, p = f.graph, f.positions
    R = np.zeros((len(g.edges), 2 * g.n))
    for m, (j, i) in enumerate(g.edges):
        diff = p[j - 1] - p[i - 1]
        R[m, 2 * (j - 1): 2 * j] = diff
        R[m, 2 * (i - 1): 2 * i] = -diff
    return R


def rigidity_rank(f: Framework, tol: float = RANK_TOL) -> int:
    """Numeric rank of the rigidity matrix via singular values."""
    s = np.linalg.svd(rigidity_matrix(f), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def is_infinitesimally_rigid(f: Framework, tol: float = RANK_TOL) -> bool:
    """True iff the rigidity matrix attains the maximal planar rank 2n-3."""
    return rigidity_rank(f, tol=tol) == 2 * f.graph.n - 3

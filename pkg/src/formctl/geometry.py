"""Signed areas, formation specs, and congruence predicates.

The signed area of an ordered planar triangle is positive when the
vertices run counterclockwise.  A formation spec couples an LFF graph
with desired edge lengths and desired per-triangle signed areas; two
embeddings that realize the same lengths and the same signed areas are
strongly congruent (related by rotation + translation, never by a
reflection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import SpecError
from .graphs import DirectedFormationGraph, Framework, triangles_of, validate_conditions

# Rotation by -90 degrees; all signed-area code routes through this one matrix.
J = np.array([[0.0, 1.0], [-1.0, 0.0]])

HERON_CLAMP = -1e-12  # round-off allowance on near-degenerate radicands
DEFAULT_TOL = 1e-6  # relative tolerance on squared distances for predicates


def signed_area(p_i, p_j, p_k) -> float:
    """Signed area of triangle (i, j, k): 0.5 (p_k - p_i)^T J (p_k - p_j)."""
    p_i = np.asarray(p_i, dtype=float)
    p_j = np.asarray(p_j, dtype=float)
    p_k = np.asarray(p_k, dtype=float)
    return 0.5 * float((p_k - p_i) @ J @ (p_k - p_j))


def area_vector(f: Framework, triangles: Iterable[tuple[int, int, int]]) -> np.ndarray:
    """Stacked signed areas of the framework's triangles, one per entry."""
    p = f.positions
    out = []
    for i, j, k in triangles:
        if not (1 <= i <= f.graph.n and 1 <= j <= f.graph.n and 1 <= k <= f.graph.n):
            raise SpecError(f"triangle ({i},{j},{k}) references vertex outside 1..{f.graph.n}")
        out.append(signed_area(p[i - 1], p[j - 1], p[k - 1]))
    return np.array(out)


def heron_radicand(d_a: float, d_b: float, d_c: float) -> float:
    """s(s-a)(s-b)(s-c) with s the semi-perimeter."""
    s = 0.5 * (d_a + d_b + d_c)
    return s * (s - d_a) * (s - d_b) * (s - d_c)


def desired_area_from_distances(
    d_ji: float, d_ki: float, d_kj: float, orientation: int
) -> float:
    """Signed triangle area from its three side lengths and a winding sign."""
    if orientation not in (+1, -1):
        raise SpecError(f"orientation must be +1 or -1, got {orientation}")
    if min(d_ji, d_ki, d_kj) <= 0:
        raise SpecError(f"side lengths must be positive, got ({d_ji}, {d_ki}, {d_kj})")
    rad = heron_radicand(d_ji, d_ki, d_kj)
    if rad <= HERON_CLAMP:
        raise SpecError(
            f"triangle inequality violated for side lengths ({d_ji}, {d_ki}, {d_kj})"
        )
    return orientation * math.sqrt(max(rad, 0.0))


def quadrilateral_area(p1, p2, p3, p4) -> float:
    """Unsigned quadrilateral area from squared distances only.

    The labeling puts the diagonals between p3, p2 and between p4, p1;
    the value equals |S_123 - S_234| for both convex and concave cases.
    """
    p1, p2, p3, p4 = (np.asarray(q, dtype=float) for q in (p1, p2, p3, p4))

    def d2(u, v):
        w = u - v
        return float(w @ w)

    rad = 4.0 * d2(p3, p2) * d2(p4, p1) - (
        d2(p2, p1) + d2(p4, p3) - d2(p3, p1) - d2(p4, p2)
    ) ** 2
    if rad < -1e-12:
        raise ValueError(f"degenerate quadrilateral labeling (radicand {rad})")
    return 0.25 * math.sqrt(max(rad, 0.0))


def triangle_shape_condition(d_ji: float, d_ki: float, d_kj: float) -> bool:
    """True iff |d_ki^2 - d_kj^2| / d_ji^2 < 2 sqrt(2).

    Equivalently, embedding the base on the x-axis centered at the
    origin, the apex abscissa satisfies |x| < sqrt(2) d_ji.
    """
    return abs(d_ki**2 - d_kj**2) / d_ji**2 < 2.0 * math.sqrt(2.0)


def _sq_dist(p: np.ndarray, i: int, j: int) -> float:
    w = p[i - 1] - p[j - 1]
    return float(w @ w)


def _close_rel(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-30)


def equivalent(f: Framework, g: Framework, tol: float = DEFAULT_TOL) -> bool:
    """Same squared length on every graph edge, within relative tol."""
    if f.graph.edges != g.graph.edges or f.graph.n != g.graph.n:
        raise SpecError("frameworks must share the same graph")
    return all(
        _close_rel(_sq_dist(f.positions, j, i), _sq_dist(g.positions, j, i), tol)
        for j, i in f.graph.edges
    )


def congruent(f: Framework, g: Framework, tol: float = DEFAULT_TOL) -> bool:
    """Same squared distance for every vertex pair, within relative tol."""
    if f.graph.n != g.graph.n:
        raise SpecError("frameworks must share the same vertex set")
    n = f.graph.n
    return all(
        _close_rel(_sq_dist(f.positions, j, i), _sq_dist(g.positions, j, i), tol)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )


def strongly_congruent(
    f: Framework,
    g: Framework,
    triangles: Iterable[tuple[int, int, int]],
    tol: float = DEFAULT_TOL,
) -> bool:
    """Equivalent and componentwise-equal signed-area vectors.

    For frameworks built by type-I insertions this coincides with
    congruence plus equal area vectors, so it rules out reflections.
    """
    triangles = tuple(triangles)
    if not equivalent(f, g, tol=tol):
        return False
    chi_f = area_vector(f, triangles)
    chi_g = area_vector(g, triangles)
    return bool(np.allclose(chi_f, chi_g, rtol=tol, atol=tol))


def _required_pairs(g: DirectedFormationGraph) -> list[tuple[int, int]]:
    """Graph edges plus each triangle's base pair, as (high, low) keys."""
    pairs = [(j, i) for j, i in g.edges]
    for i, j, _k in triangles_of(g):
        if (j, i) not in pairs:
            pairs.append((j, i))
    return pairs


@dataclass(frozen=True)
class FormationSpec:
    """Desired formation: graph + edge lengths + per-triangle signed areas.

    ``distances`` is keyed by (high label, low label) pairs and must cover
    every graph edge and every triangle base; ``areas`` is keyed by the
    triangle tuples of :func:`triangles_of`.  ``desired_positions`` is one
    concrete embedding realizing the lengths and signed areas.
    """

    graph: DirectedFormationGraph
    distances: dict[tuple[int, int], float]
    areas: dict[tuple[int, int, int], float]
    desired_positions: np.ndarray

    def __post_init__(self):
        report = validate_conditions(self.graph)
        if not report.passed:
            raise SpecError("invalid LFF graph: " + "; ".join(report.violations))
        tris = triangles_of(self.graph)
        for pair in _required_pairs(self.graph):
            if pair not in self.distances:
                raise SpecError(f"missing desired distance for pair {pair}")
            if not self.distances[pair] > 0:
                raise SpecError(f"desired distance for {pair} must be positive")
        for tri in tris:
            if tri not in self.areas:
                raise SpecError(f"missing desired signed area for triangle {tri}")
            d_ji, d_ki, d_kj = self.triangle_sides(tri)
            rad = heron_radicand(d_ji, d_ki, d_kj)
            if rad <= HERON_CLAMP:
                raise SpecError(
                    f"triangle {tri} violates the strict triangle inequality"
                )
            heron = math.sqrt(max(rad, 0.0))
            if not _close_rel(abs(self.areas[tri]), heron, 1e-9):
                raise SpecError(
                    f"signed area for triangle {tri} ({self.areas[tri]}) is inconsistent "
                    f"with its side lengths (|area| should be {heron})"
                )
        pos = np.asarray(self.desired_positions, dtype=float)
        if pos.shape != (self.graph.n, 2) or not np.all(np.isfinite(pos)):
            raise SpecError("desired_positions must be a finite (n, 2) array")
        for (j, i), d in self.distances.items():
            if not _close_rel(_sq_dist(pos, j, i), d * d, 1e-6):
                raise SpecError(
                    f"desired_positions realize ||p_{j} - p_{i}|| = "
                    f"{math.sqrt(_sq_dist(pos, j, i)):.9g}, spec says {d}"
                )
        chi = area_vector(Framework(self.graph, pos), tris)
        for tri, s in zip(tris, chi):
            if not _close_rel(s, self.areas[tri], 1e-6) and abs(s - self.areas[tri]) > 1e-9:
                raise SpecError(
                    f"desired_positions give signed area {s} for triangle {tri}, "
                    f"spec says {self.areas[tri]}"
                )
        pos.setflags(write=False)
        object.__setattr__(self, "desired_positions", pos)

    # -- accessors ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        return triangles_of(self.graph)

    def distance(self, a: int, b: int) -> float:
        return self.distances[(max(a, b), min(a, b))]

    def triangle_sides(self, tri: tuple[int, int, int]) -> tuple[float, float, float]:
        """(d_ji, d_ki, d_kj) for triangle (i, j, k)."""
        i, j, k = tri
        return self.distance(j, i), self.distance(k, i), self.distance(k, j)

    def desired_framework(self) -> Framework:
        return Framework(self.graph, self.desired_positions)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coordinates(
        cls, graph: DirectedFormationGraph, coordinates
    ) -> "FormationSpec":
        """Author a spec from desired vertex coordinates."""
        pos = np.asarray(coordinates, dtype=float)
        if pos.shape != (graph.n, 2):
            raise SpecError(f"coordinates shape {pos.shape} does not match n={graph.n}")
        distances = {
            (j, i): math.sqrt(_sq_dist(pos, j, i)) for j, i in _required_pairs(graph)
        }
        areas = {
            (i, j, k): signed_area(pos[i - 1], pos[j - 1], pos[k - 1])
            for i, j, k in triangles_of(graph)
        }
        return cls(graph=graph, distances=distances, areas=areas, desired_positions=pos)

    @classmethod
    def from_distances(
        cls,
        graph: DirectedFormationGraph,
        distances: Mapping[tuple[int, int], float],
        orientations: Mapping[tuple[int, int, int], int],
    ) -> "FormationSpec":
        """Author a spec from edge lengths and per-triangle winding signs."""
        dist = {(max(a, b), min(a, b)): float(d) for (a, b), d in distances.items()}
        tris = triangles_of(graph)
        areas = {}
        for tri in tris:
            if tri not in orientations:
                raise SpecError(f"missing orientation for triangle {tri}")
            i, j, k = tri
            try:
                d_ji = dist[(j, i)]
                d_ki = dist[(k, i)]
                d_kj = dist[(k, j)]
            except KeyError as exc:
                raise SpecError(f"missing desired distance for pair {exc.args[0]}") from exc
            areas[tri] = desired_area_from_distances(
                d_ji, d_ki, d_kj, orientations[tri]
            )
        pos = _embed(graph, dist, areas)
        return cls(graph=graph, distances=dist, areas=areas, desired_positions=pos)


def _embed(
    graph: DirectedFormationGraph,
    dist: Mapping[tuple[int, int], float],
    areas: Mapping[tuple[int, int, int], float],
) -> np.ndarray:
    """Place vertices one by one so lengths and signed areas are realized."""
    pos = np.zeros((graph.n, 2))
    d21 = dist[(2, 1)]
    pos[1] = (d21, 0.0)
    for i, j, k in triangles_of(graph):
        p_i, p_j = pos[i - 1], pos[j - 1]
        d_ki, d_kj = dist[(k, i)], dist[(k, j)]
        base = p_j - p_i
        b2 = float(base @ base)
        if b2 <= 0:
            raise SpecError(f"vertices {i} and {j} coincide in the embedding")
        # circle-circle intersection in the (i -> j) frame
        t = (d_ki**2 - d_kj**2 + b2) / (2.0 * b2)
        h2 = d_ki**2 - t * t * b2
        if h2 < -1e-9 * max(d_ki**2, b2):
            raise SpecError(
                f"triangle ({i},{j},{k}) cannot be embedded with the given distances"
            )
        h = math.sqrt(max(h2, 0.0))
        normal = np.array([-base[1], base[0]]) / math.sqrt(b2)
        cand = p_i + t * base + h * normal
        if signed_area(p_i, p_j, cand) * areas[(i, j, k)] < 0:
            cand = p_i + t * base - h * normal
        pos[k - 1] = cand
    return pos

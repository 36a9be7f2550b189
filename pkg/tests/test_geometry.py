import math

import numpy as np
import pytest

from formctl.errors import SpecError
from formctl.geometry import (
    FormationSpec,
    area_vector,
    congruent,
    desired_area_from_distances,
    equivalent,
    quadrilateral_area,
    signed_area,
    strongly_congruent,
    triangle_shape_condition,
)
from formctl.graphs import Framework, build_lff, triangles_of


def shoelace(pts):
    """Independent oracle: shoelace signed area of a polygon."""
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def random_isometry(rng):
    theta = rng.uniform(0, 2 * np.pi)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    shift = rng.uniform(-20, 20, 2)
    return lambda p: np.asarray(p) @ rot.T + shift


def chain_framework():
    g = build_lff(5, [(1, 2), (2, 3), (3, 4)])
    s3 = np.sqrt(3.0)
    pos = np.array([(0, 0), (2, 0), (1, s3), (3, s3), (2, 2 * s3)])
    return Framework(g, pos)


class TestSignedArea:
    def test_unit_right_triangle(self):
        assert signed_area((0, 0), (1, 0), (0, 1)) == pytest.approx(0.5)

    def test_orientation_swap_negates(self):
        assert signed_area((0, 0), (0, 1), (1, 0)) == pytest.approx(-0.5)

    def test_collinear_zero(self):
        assert signed_area((0, 0), (1, 0), (2, 0)) == 0.0

    def test_matches_shoelace_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            pts = rng.uniform(-10, 10, (3, 2))
            assert signed_area(*pts) == pytest.approx(shoelace(pts), abs=1e-12)

    def test_isometry_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            pts = rng.uniform(-1, 1, (3, 2))
            iso = random_isometry(rng)
            moved = [iso(p) for p in pts]
            assert signed_area(*moved) == pytest.approx(signed_area(*pts), abs=1e-12)
            for a, b in ((0, 1), (0, 2), (1, 2)):
                assert np.linalg.norm(moved[a] - moved[b]) == pytest.approx(
                    np.linalg.norm(pts[a] - pts[b]), abs=1e-12
                )


class TestAreaVector:
    def test_chain_signs(self):
        f = chain_framework()
        chi = area_vector(f, triangles_of(f.graph))
        assert np.all(np.sign(chi) == [1, -1, 1])

    def test_collinear_zero_vector(self):
        g = build_lff(4, [(1, 2), (2, 3)])
        f = Framework(g, np.array([(0.0, 0), (1, 0), (2, 0), (3, 0)]))
        np.testing.assert_array_equal(area_vector(f, triangles_of(g)), 0.0)

    def test_reflection_negates_componentwise(self):
        rng = np.random.default_rng(5)
        g = build_lff(6, [(1, 2), (1, 3), (2, 4), (3, 5)])
        tris = triangles_of(g)
        for _ in range(50):
            pos = rng.uniform(-5, 5, (6, 2))
            mirrored = pos * np.array([1.0, -1.0])
            chi = area_vector(Framework(g, pos), tris)
            chi_m = area_vector(Framework(g, mirrored), tris)
            np.testing.assert_allclose(chi_m, -chi, atol=1e-12)

    def test_out_of_range_vertex_rejected(self):
        f = chain_framework()
        with pytest.raises(SpecError):
            area_vector(f, [(1, 2, 9)])


class TestDesiredAreaFromDistances:
    def test_3_4_5(self):
        assert desired_area_from_distances(3, 4, 5, +1) == pytest.approx(6.0, rel=1e-12)

    def test_equilateral_2(self):
        assert desired_area_from_distances(2, 2, 2, +1) == pytest.approx(
            math.sqrt(3.0), rel=1e-12
        )

    def test_frozen_remark_triangle(self):
        # |area| of sides (1, 2.1, 3); golden value from 40-digit evaluation
        assert desired_area_from_distances(1, 2.1, 3, -1) == pytest.approx(
            -0.5449713295211045, rel=1e-12
        )

    def test_triangle_inequality_violation(self):
        with pytest.raises(SpecError):
            desired_area_from_distances(1, 2, 3.5, +1)

    def test_bad_orientation(self):
        with pytest.raises(SpecError):
            desired_area_from_distances(3, 4, 5, 0)

    def test_heron_vs_shoelace(self):
        rng = np.random.default_rng(6)
        done = 0
        while done < 300:
            pts = rng.uniform(-10, 10, (3, 2))
            area = shoelace(pts)
            if abs(area) < 1e-3:
                continue
            a = np.linalg.norm(pts[1] - pts[0])
            b = np.linalg.norm(pts[2] - pts[0])
            c = np.linalg.norm(pts[2] - pts[1])
            assert desired_area_from_distances(a, b, c, +1) == pytest.approx(
                abs(area), rel=1e-9
            )
            done += 1


class TestCongruencePredicates:
    def test_isometric_copy_strongly_congruent(self):
        rng = np.random.default_rng(7)
        f = chain_framework()
        tris = triangles_of(f.graph)
        for _ in range(20):
            iso = random_isometry(rng)
            g = Framework(f.graph, iso(f.positions))
            assert equivalent(f, g)
            assert congruent(f, g)
            assert strongly_congruent(f, g, tris)

    def test_reflected_copy_not_strongly_congruent(self):
        f = chain_framework()
        tris = triangles_of(f.graph)
        g = Framework(f.graph, f.positions * np.array([1.0, -1.0]))
        assert equivalent(f, g)
        assert congruent(f, g)
        assert not strongly_congruent(f, g, tris)

    def test_single_vertex_flip(self):
        # flip the last vertex across the line through its two out-neighbors:
        # all constrained distances survive, exactly one area entry negates
        f = chain_framework()
        tris = triangles_of(f.graph)
        pos = np.array(f.positions)
        a, b = pos[2], pos[3]  # out-neighbors of vertex 5
        d = (b - a) / np.linalg.norm(b - a)
        v = pos[4] - a
        pos[4] = a + 2 * (v @ d) * d - v
        g = Framework(f.graph, pos)
        assert equivalent(f, g)
        assert not congruent(f, g)
        assert not strongly_congruent(f, g, tris)
        chi_f = area_vector(f, tris)
        chi_g = area_vector(g, tris)
        np.testing.assert_allclose(chi_g[:-1], chi_f[:-1], atol=1e-12)
        assert chi_g[-1] == pytest.approx(-chi_f[-1], abs=1e-12)

    def test_different_graphs_rejected(self):
        f = chain_framework()
        g = Framework(build_lff(5, [(1, 2), (1, 2), (3, 4)]), f.positions)
        with pytest.raises(SpecError):
            equivalent(f, g)


class TestQuadrilateralArea:
    def test_unit_square(self):
        p1, p2, p4, p3 = (0, 0), (1, 0), (1, 1), (0, 1)
        val = quadrilateral_area(p1, p2, p3, p4)
        assert val == pytest.approx(1.0, rel=1e-12)
        s123 = signed_area(p1, p2, p3)
        s234 = signed_area(p2, p3, p4)
        assert val == pytest.approx(abs(s123 - s234), rel=1e-12)

    def test_congruent_copy_same_value(self):
        rng = np.random.default_rng(8)
        pts = np.array([(0.0, 0), (2, 0.5), (1, 2), (-1, 1)])
        base = quadrilateral_area(*pts)
        for _ in range(10):
            iso = random_isometry(rng)
            assert quadrilateral_area(*(iso(p) for p in pts)) == pytest.approx(
                base, rel=1e-12
            )

    def test_collinear_zero(self):
        assert quadrilateral_area((0, 0), (1, 0), (2, 0), (3, 0)) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_matches_area_difference(self):
        rng = np.random.default_rng(9)
        done = 0
        while done < 300:
            pts = rng.uniform(-5, 5, (4, 2))
            ref = abs(signed_area(pts[0], pts[1], pts[2]) - signed_area(pts[1], pts[2], pts[3]))
            if ref < 1e-3:
                continue
            assert quadrilateral_area(*pts) == pytest.approx(ref, rel=1e-9)
            done += 1


class TestShapeCondition:
    def test_remark_triangle_fails(self):
        assert not triangle_shape_condition(1, 2.1, 3)
        assert abs(3**2 - 2.1**2) / 1**2 == pytest.approx(4.59)

    def test_equilateral_passes(self):
        assert triangle_shape_condition(2, 2, 2)

    def test_apex_abscissa_equivalence(self):
        # |x| < sqrt(2) d_ji for the apex over a centered base iff the condition holds
        rng = np.random.default_rng(10)
        for _ in range(200):
            d = rng.uniform(0.5, 3.0)
            x = rng.uniform(-3, 3)
            y = rng.uniform(0.1, 3.0)
            d_ki = math.hypot(x + d / 2, y)
            d_kj = math.hypot(x - d / 2, y)
            assert triangle_shape_condition(d, d_ki, d_kj) == (abs(x) < math.sqrt(2) * d)


class TestFormationSpec:
    def test_coordinate_and_distance_routes_agree(self):
        g = build_lff(3, [(1, 2)])
        coords = np.array([(0.0, 0), (2, 0), (1, np.sqrt(3))])
        by_coords = FormationSpec.from_coordinates(g, coords)
        by_dist = FormationSpec.from_distances(
            g, {(2, 1): 2, (3, 1): 2, (3, 2): 2}, {(1, 2, 3): +1}
        )
        assert by_coords.distances.keys() == by_dist.distances.keys()
        for key in by_coords.distances:
            assert by_coords.distances[key] == pytest.approx(by_dist.distances[key])
        for tri in by_coords.areas:
            assert by_coords.areas[tri] == pytest.approx(by_dist.areas[tri])

    def test_embedding_realizes_negative_orientation(self):
        g = build_lff(3, [(1, 2)])
        spec = FormationSpec.from_distances(
            g, {(2, 1): 2, (3, 1): 2, (3, 2): 2}, {(1, 2, 3): -1}
        )
        assert spec.areas[(1, 2, 3)] == pytest.approx(-math.sqrt(3.0))
        p = spec.desired_positions
        assert signed_area(p[0], p[1], p[2]) == pytest.approx(-math.sqrt(3.0))

    def test_base_pair_distance_required_for_leader_pair_triangles(self):
        # vertex 4 hangs off (1, 2): pair (2, 1) is a base of two triangles
        g = build_lff(4, [(1, 2), (1, 2)])
        with pytest.raises(SpecError):
            FormationSpec.from_distances(
                g,
                {(3, 1): 2, (3, 2): 2, (4, 1): 2, (4, 2): 2},
                {(1, 2, 3): +1, (1, 2, 4): -1},
            )

    def test_inconsistent_area_rejected(self):
        g = build_lff(3, [(1, 2)])
        coords = np.array([(0.0, 0), (2, 0), (1, np.sqrt(3))])
        spec = FormationSpec.from_coordinates(g, coords)
        with pytest.raises(SpecError):
            FormationSpec(
                graph=g,
                distances=dict(spec.distances),
                areas={(1, 2, 3): 2.5},
                desired_positions=coords,
            )

    def test_positions_inconsistent_with_distances_rejected(self):
        g = build_lff(3, [(1, 2)])
        coords = np.array([(0.0, 0), (2, 0), (1, np.sqrt(3))])
        spec = FormationSpec.from_coordinates(g, coords)
        with pytest.raises(SpecError):
            FormationSpec(
                graph=g,
                distances=dict(spec.distances),
                areas=dict(spec.areas),
                desired_positions=coords * 2.0,
            )

    def test_random_distance_specs_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(3, 8))
            attachments = []
            for k in range(3, n + 1):
                i, j = sorted(rng.choice(np.arange(1, k), size=2, replace=False))
                attachments.append((int(i), int(j)))
            g = build_lff(n, attachments)
            pos = rng.uniform(-5, 5, (n, 2))
            if any(
                abs(signed_area(pos[i - 1], pos[j - 1], pos[k - 1])) < 1e-2
                for i, j, k in triangles_of(g)
            ):
                continue
            spec = FormationSpec.from_coordinates(g, pos)
            rebuilt = FormationSpec.from_distances(
                g,
                dict(spec.distances),
                {t: (1 if spec.areas[t] > 0 else -1) for t in spec.areas},
            )
            for t in spec.areas:
                assert rebuilt.areas[t] == pytest.approx(spec.areas[t], rel=1e-6)
            f = spec.desired_framework()
            h = rebuilt.desired_framework()
            assert strongly_congruent(f, h, triangles_of(g), tol=1e-6)

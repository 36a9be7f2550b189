"""Acceptance gate: every stated quantitative/property criterion, one line each.

Each test prints a single PASS/FAIL line (visible even under capture via
``capsys.disabled``) and enforces the stated tolerance and runtime budget.
"""

import math
import time

import numpy as np
import pytest

from formctl.dynamics import (
    VERDICT_STRONG,
    AgentState,
    simulate,
    z21_closed_form,
)
from formctl.gains import (
    gain_ratio_lower_bound,
    shared_radicand,
    stationary_points,
    stationary_quartic,
)
from formctl.geometry import (
    area_vector,
    desired_area_from_distances,
    quadrilateral_area,
    signed_area,
    FormationSpec,
)
from formctl.graphs import Framework, build_lff, rigidity_rank, triangles_of
from formctl.gains import GainSchedule, recommended_schedule
from formctl.harness import check_trajectory, sample_initial_state
from formctl.quartic import (
    Quartic,
    certifies_no_real_root,
    discriminant_quantities,
    has_real_root,
    real_roots_companion,
)


def report(capsys, idx, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {idx}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def equilateral_spec():
    g = build_lff(3, [(1, 2)])
    return FormationSpec.from_distances(
        g, {(2, 1): 2, (3, 1): 2, (3, 2): 2}, {(1, 2, 3): +1}
    )


def chain_spec():
    g = build_lff(5, [(1, 2), (2, 3), (3, 4)])
    s3 = math.sqrt(3.0)
    return FormationSpec.from_coordinates(
        g, [(0, 0), (2, 0), (1, s3), (3, s3), (2, 2 * s3)]
    )


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    # compile the jitted simulation kernels outside any timed budget
    spec = equilateral_spec()
    gains = GainSchedule(alphas={2: 1.0, 3: 1.0}, betas={3: 0.825})
    simulate(spec, gains, AgentState(np.array([(0.0, 0), (3, 0), (1, 2)])), T=0.01)


def test_criterion_1_gain_ratio_interval(capsys):
    # triangle base 1, legs 2.1 and 3: the set of gain ratios whose quartic
    # has no real root must be an interval matching (10.42, 13.55) +- 0.05
    t0 = time.perf_counter()

    def no_root(g):
        return not has_real_root(stationary_quartic(1.0, 2.1, 3.0, g))

    grid = np.arange(2.01, 30.0, 0.01)
    flags = [no_root(float(g)) for g in grid]
    inside = [g for g, f in zip(grid, flags) if f]
    # contiguity: the no-root set on the grid is one interval
    first = flags.index(True)
    last = len(flags) - 1 - flags[::-1].index(True)
    contiguous = all(flags[first : last + 1])

    def bisect(lo, hi):
        flo = no_root(lo)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if no_root(mid) == flo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    lo_end = bisect(float(grid[first]) - 0.01, float(grid[first]))
    hi_end = bisect(float(grid[last]) + 0.01, float(grid[last]))
    lo_end, hi_end = min(lo_end, hi_end), max(lo_end, hi_end)
    elapsed = time.perf_counter() - t0
    ok = (
        contiguous
        and bool(inside)
        and abs(lo_end - 10.42) <= 0.05
        and abs(hi_end - 13.55) <= 0.05
        and elapsed < 5.0
    )
    report(
        capsys,
        1,
        ok,
        f"no-real-root ratio interval ({lo_end:.4f}, {hi_end:.4f}) vs (10.42, 13.55) "
        f"+-0.05, contiguous={contiguous}, {elapsed:.2f}s < 5s",
    )


def test_criterion_2_no_root_certificate_soundness(capsys):
    rng = np.random.default_rng(101)
    trials, certified, violations = 10_000, 0, 0
    for _ in range(trials):
        c = rng.uniform(-10, 10, 5)
        while c[0] == 0:
            c[0] = rng.uniform(-10, 10)
        q = Quartic(*c)
        if certifies_no_real_root(discriminant_quantities(q)):
            certified += 1
            if has_real_root(q) or real_roots_companion(q):
                violations += 1
    ok = violations == 0 and certified > 0
    report(
        capsys,
        2,
        ok,
        f"{trials} random quartics, {certified} certified no-real-root, "
        f"{violations} oracle violations",
    )


def test_criterion_3_certified_bound_end_to_end(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    checked, violations = 0, 0
    while checked < 200:
        d1, d2, d3 = rng.uniform(0.5, 3.0, 3)
        if shared_radicand(d1, d2, d3) <= 1e-6:
            continue
        if abs(d2**2 - d3**2) / d1**2 >= 2 * math.sqrt(2) - 1e-3:
            continue
        if abs(d2 - d3) <= 1e-3 * max(d2, d3):
            continue
        bound = max(gain_ratio_lower_bound(d1, d2, d3), 2.0)
        s_star = desired_area_from_distances(d1, d2, d3, +1)
        for g in bound + rng.uniform(1e-3, 100.0, 20):
            g = float(g)
            if has_real_root(stationary_quartic(d1, d2, d3, g)):
                violations += 1
            if len(stationary_points(d1, d2, d3, s_star, g)) != 1:
                violations += 1
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 60.0
    report(
        capsys,
        3,
        ok,
        f"200 random shape-passing scalene triangles x 20 ratios above the bound: "
        f"{violations} violations, {elapsed:.1f}s < 60s",
    )


def test_criterion_4_two_agent_analytic_oracle(capsys):
    spec = FormationSpec.from_distances(build_lff(2, []), {(2, 1): 1.0}, {})
    gains = GainSchedule(alphas={2: 1.0}, betas={})
    # z21(0) = 1: place the pair at squared distance 2
    init = AgentState(np.array([(0.0, 0.0), (math.sqrt(2.0), 0.0)]))
    res = simulate(spec, gains, init, h=1e-3, T=10.0, decimation=1, sustain=10**9)
    dev = max(
        abs(float(z) - z21_closed_form(1.0, 1.0, 1.0, float(t)))
        for t, z in zip(res.trajectory.times, res.trajectory.z[:, 0])
    )
    ok = dev < 1e-8
    report(capsys, 4, ok, f"max |z_num - z_closed_form| = {dev:.3g} < 1e-8 on t in [0, 10]")


def test_criterion_5_convergence_at_scale(capsys):
    t0 = time.perf_counter()
    cases = [
        ("equilateral-2", equilateral_spec(), GainSchedule(alphas={2: 1.0, 3: 1.0}, betas={3: 0.825})),
        ("5-agent chain", chain_spec(), None),
    ]
    failures = []
    for name, spec, gains in cases:
        if gains is None:
            gains = recommended_schedule(spec)
        for seed in range(100):
            init = sample_initial_state(spec.n, (-5.0, 5.0), seed)
            res = simulate(spec, gains, init)
            ok_check, _ = check_trajectory(spec, res.trajectory.positions[-1])
            if (
                res.verdict != VERDICT_STRONG
                or res.final_max_z >= 1e-6
                or res.final_max_area >= 1e-6
                or not ok_check
            ):
                failures.append((name, seed, res.verdict))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300.0
    report(
        capsys,
        5,
        ok,
        f"2 specs x 100 seeds all strong-congruent with |z|,|area err| < 1e-6 "
        f"(failures: {failures[:5]}), {elapsed:.1f}s < 300s",
    )


def test_criterion_6_reflection_discrimination(capsys):
    spec = equilateral_spec()
    s_star = spec.areas[(1, 2, 3)]
    reflected = spec.desired_positions * np.array([1.0, -1.0])
    rng = np.random.default_rng(103)
    start = AgentState(reflected + rng.uniform(-0.2, 0.2, (3, 2)))

    distance_only = GainSchedule(alphas={2: 1.0, 3: 1.0}, betas={3: 0.0})
    res_d = simulate(spec, distance_only, start, T=60.0)
    chi_d = area_vector(Framework(spec.graph, res_d.trajectory.positions[-1]), spec.triangles)
    flipped = (
        res_d.verdict != VERDICT_STRONG
        and float(np.max(np.abs(res_d.trajectory.z[-1]))) < 1e-5
        and chi_d[0] < 0 < s_star
    )

    full = GainSchedule(alphas={2: 1.0, 3: 1.0}, betas={3: 0.825})
    res_f = simulate(spec, full, start)
    strong = res_f.verdict == VERDICT_STRONG

    ok = flipped and strong
    report(
        capsys,
        6,
        ok,
        f"reflected start: distance-only verdict={res_d.verdict}, final z="
        f"{float(np.max(np.abs(res_d.trajectory.z[-1]))):.2g}, chi={chi_d[0]:.3f} "
        f"(flipped vs {s_star:.3f}); full gains verdict={res_f.verdict}",
    )


def test_criterion_7_geometry_identities(capsys):
    rng = np.random.default_rng(104)
    worst_heron, worst_quad, worst_chi = 0.0, 0.0, 0.0

    done = 0
    while done < 1000:
        pts = rng.uniform(-10, 10, (3, 2))
        area = signed_area(*pts)
        if abs(area) < 1e-2:
            continue
        a = float(np.linalg.norm(pts[1] - pts[0]))
        b = float(np.linalg.norm(pts[2] - pts[0]))
        c = float(np.linalg.norm(pts[2] - pts[1]))
        heron = desired_area_from_distances(a, b, c, +1)
        worst_heron = max(worst_heron, abs(heron - abs(area)) / abs(area))
        done += 1

    done = 0
    while done < 1000:
        pts = rng.uniform(-5, 5, (4, 2))
        ref = abs(signed_area(pts[0], pts[1], pts[2]) - signed_area(pts[1], pts[2], pts[3]))
        if ref < 1e-2:
            continue
        worst_quad = max(worst_quad, abs(quadrilateral_area(*pts) - ref) / ref)
        done += 1

    g = build_lff(6, [(1, 2), (2, 3), (1, 2), (4, 5)])
    tris = triangles_of(g)
    for _ in range(200):
        pos = rng.uniform(-5, 5, (6, 2))
        chi = area_vector(Framework(g, pos), tris)
        chi_m = area_vector(Framework(g, pos * np.array([1.0, -1.0])), tris)
        worst_chi = max(worst_chi, float(np.max(np.abs(chi_m + chi))))

    ok = worst_heron < 1e-9 and worst_quad < 1e-9 and worst_chi <= 1e-12
    report(
        capsys,
        7,
        ok,
        f"Heron-vs-shoelace rel err {worst_heron:.2g} < 1e-9; quadrilateral "
        f"formula rel err {worst_quad:.2g} < 1e-9; reflection chi-negation "
        f"err {worst_chi:.2g} <= 1e-12",
    )


def test_criterion_8_equivariance(capsys):
    spec = chain_spec()
    gains = recommended_schedule(spec)
    rng = np.random.default_rng(105)
    base = rng.uniform(-3, 3, (5, 2))
    ref = simulate(spec, gains, AgentState(base), T=3.0, sustain=10**9)
    worst = 0.0
    for _ in range(20):
        theta = rng.uniform(0, 2 * np.pi)
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        moved = base @ rot.T + rng.uniform(-20, 20, 2)
        res = simulate(spec, gains, AgentState(moved), T=3.0, sustain=10**9)
        worst = max(
            worst,
            float(np.max(np.abs(res.trajectory.z - ref.trajectory.z))),
            float(np.max(np.abs(res.trajectory.areas - ref.trajectory.areas))),
        )
    ok = worst < 1e-9
    report(
        capsys,
        8,
        ok,
        f"20 random isometries: max |error-signal deviation| = {worst:.2g} < 1e-9",
    )


def test_criterion_9_rigidity_ranks(capsys):
    rng = np.random.default_rng(106)
    bad = 0
    for n in range(3, 13):
        for _ in range(5):
            attachments = []
            for k in range(3, n + 1):
                i, j = sorted(rng.choice(np.arange(1, k), size=2, replace=False))
                attachments.append((int(i), int(j)))
            g = build_lff(n, attachments)
            generic = Framework(g, rng.uniform(-10, 10, (n, 2)))
            if rigidity_rank(generic) != 2 * n - 3:
                bad += 1
            arbitrary = Framework(g, rng.uniform(-10, 10, (n, 2)))
            if rigidity_rank(arbitrary) > 2 * n - 3:
                bad += 1
            collinear = Framework(
                g, np.column_stack([rng.uniform(-10, 10, n), np.zeros(n)])
            )
            if rigidity_rank(collinear) >= 2 * n - 3:
                bad += 1
    ok = bad == 0
    report(
        capsys,
        9,
        ok,
        f"generic LFF rank = 2n-3, universal rank <= 2n-3, collinear rank drops "
        f"(n = 3..12, 5 graphs each): {bad} failures",
    )

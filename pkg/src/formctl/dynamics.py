"""Closed-loop agent dynamics: error signals, control law, integration.

Agents follow single-integrator kinematics.  The leader holds position,
the first follower regulates one squared distance, and every ordinary
follower regulates two squared distances plus the signed area of its
triangle.  Trajectories are integrated with classical fixed-step RK4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import SpecError
from .gains import GainSchedule
from .geometry import DEFAULT_TOL, FormationSpec, strongly_congruent
from .graphs import Framework

DEFAULT_STEP = 1e-3
DEFAULT_HORIZON = 200.0
DEFAULT_EPS = 1e-6
SUSTAIN_SAMPLES = 100  # consecutive below-threshold steps required to declare convergence

VERDICT_STRONG = "converged-strong-congruent"
VERDICT_OTHER = "converged-other"
VERDICT_NOT = "not-converged"
VERDICT_DIVERGED = "diverged"


@dataclass(frozen=True)
class AgentState:
    """All agent positions at one instant."""

    positions: np.ndarray  # (n, 2)
    time: float = 0.0

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise SpecError(f"positions must be (n, 2), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise SpecError("positions must be finite")
        if self.time < 0:
            raise SpecError("time must be nonnegative")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)


@dataclass(frozen=True)
class ErrorState:
    """Distance errors per edge and signed-area errors per triangle."""

    z: np.ndarray  # (2n - 3,), squared-length units
    areas: np.ndarray  # (n - 2,), squared-length units

    def max_abs(self) -> tuple[float, float]:
        mz = float(np.max(np.abs(self.z))) if self.z.size else 0.0
        ms = float(np.max(np.abs(self.areas))) if self.areas.size else 0.0
        return mz, ms


@dataclass(frozen=True)
class Trajectory:
    """Decimated samples of a closed-loop run."""

    times: np.ndarray  # (m,)
    positions: np.ndarray  # (m, n, 2)
    z: np.ndarray  # (m, 2n - 3)
    areas: np.ndarray  # (m, n - 2)
    potential: np.ndarray  # (m,), total potential V

    def __post_init__(self):
        if not np.all(np.diff(self.times) > 0):
            raise SpecError("sample times must be strictly increasing")


@dataclass(frozen=True)
class SimulationResult:
    trajectory: Trajectory
    verdict: str
    final_max_z: float
    final_max_area: float
    time_to_threshold: Optional[float]
    steps: int
    h: float


def _pack(spec: FormationSpec, gains: GainSchedule):
    """Kernel-ready 0-based arrays for the spec and gain schedule."""
    n = spec.n
    edges = np.array([(j - 1, i - 1) for j, i in spec.graph.edges], dtype=np.int64)
    d2e = np.array([spec.distance(j, i) ** 2 for j, i in spec.graph.edges])
    tris = np.array(
        [(i - 1, j - 1, k - 1) for i, j, k in spec.triangles], dtype=np.int64
    ).reshape(-1, 3)
    s_star = np.array([spec.areas[t] for t in spec.triangles])
    alpha = np.zeros(n)
    beta = np.zeros(n)
    for k in range(2, n + 1):
        if k not in gains.alphas:
            raise SpecError(f"gain schedule is missing alpha_{k}")
        alpha[k - 1] = gains.alphas[k]
    for k in range(3, n + 1):
        if k not in gains.betas:
            raise SpecError(f"gain schedule is missing beta_{k}")
        beta[k - 1] = gains.betas[k]
    return edges, d2e, tris, s_star, alpha, beta


def errors(spec: FormationSpec, state: AgentState) -> ErrorState:
    """z_ji = ||p_j - p_i||^2 - d_ji^2 per edge; area error per triangle."""
    p = np.asarray(state.positions)
    if p.shape[0] != spec.n:
        raise SpecError(f"state has {p.shape[0]} agents, spec has {spec.n}")
    edges, d2e, tris, s_star, _, _ = _pack(spec, _unit_gains(spec))
    z = np.empty(len(edges))
    s = np.empty(len(tris))
    _kernels.errors_kernel(p, edges, d2e, tris, s_star, z, s)
    return ErrorState(z=z, areas=s)


def _unit_gains(spec: FormationSpec) -> GainSchedule:
    return GainSchedule(
        alphas={k: 1.0 for k in range(2, spec.n + 1)},
        betas={k: 1.0 for k in range(3, spec.n + 1)},
    )


def control(spec: FormationSpec, gains: GainSchedule, state: AgentState) -> np.ndarray:
    """Velocity command for every agent; the leader's is always zero.

    Each follower's command depends only on its relative positions to its
    out-neighbors and on desired quantities.
    """
    p = np.asarray(state.positions)
    if p.shape[0] != spec.n:
        raise SpecError(f"state has {p.shape[0]} agents, spec has {spec.n}")
    edges, d2e, tris, s_star, alpha, beta = _pack(spec, gains)
    u = np.empty_like(p)
    _kernels.control_kernel(p, edges, d2e, tris, s_star, alpha, beta, u)
    return u


def step_rk4(
    spec: FormationSpec, gains: GainSchedule, state: AgentState, h: float
) -> AgentState:
    """One classical 4-stage fixed-step update."""
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    p = np.array(state.positions)
    if not np.all(np.isfinite(p)):
        raise ValueError("cannot integrate a non-finite state")
    edges, d2e, tris, s_star, alpha, beta = _pack(spec, gains)
    n = spec.n
    scratch = [np.empty((n, 2)) for _ in range(5)]
    _kernels.rk4_kernel(p, h, edges, d2e, tris, s_star, alpha, beta, *scratch)
    return AgentState(positions=p, time=state.time + h)


def lyapunov(
    spec: FormationSpec, gains: GainSchedule, state: AgentState
) -> tuple[dict[int, float], float]:
    """Per-agent potential terms V_k and their sum.

    V_2 = (alpha_2/4) z_21^2; V_k = (alpha_k/4)(z_ki^2 + z_kj^2)
    + beta_k * (area error)^2 for k >= 3.
    """
    err = errors(spec, state)
    per_agent = {k: 0.0 for k in range(2, spec.n + 1)}
    for (j, _i), z in zip(spec.graph.edges, err.z):
        per_agent[j] += 0.25 * gains.alphas[j] * z * z
    for (_i, _j, k), s in zip(spec.triangles, err.areas):
        per_agent[k] += gains.betas[k] * s * s
    return per_agent, sum(per_agent.values())


def z21_closed_form(z0: float, d21: float, alpha2: float, t: float) -> float:
    """Analytic leader-pair squared-distance error at time t.

    Solves dz/dt = -2 alpha z (z + d^2):
    z(t) = d^2 z0 / ((z0 + d^2) exp(2 d^2 alpha t) - z0).
    """
    d2 = d21 * d21
    if z0 <= -d2:
        raise ValueError(
            f"initial error {z0} requires the leader pair to be collocated (floor {-d2})"
        )
    expo = 2.0 * d2 * alpha2 * t
    if expo > 700.0:  # exp would overflow; the error has fully decayed
        return 0.0
    return d2 * z0 / ((z0 + d2) * math.exp(expo) - z0)


def simulate(
    spec: FormationSpec,
    gains: GainSchedule,
    initial: AgentState,
    h: float = DEFAULT_STEP,
    T: float = DEFAULT_HORIZON,
    convergence_eps: float = DEFAULT_EPS,
    decimation: int = 10,
    sustain: int = SUSTAIN_SAMPLES,
    allow_collocated: bool = False,
    congruence_tol: float = 1e-5,
) -> SimulationResult:
    """Integrate the closed loop until the horizon or sustained convergence.

    Convergence requires max(|z|, |area error|) below ``convergence_eps``
    for ``sustain`` consecutive steps; the verdict then reports whether
    the final state is strongly congruent to the desired formation.  A
    run whose distance errors settle while the area errors do not (e.g.
    a reflected limit under distance-only gains) yields "converged-other".
    """
    if h <= 0 or T <= 0 or convergence_eps <= 0:
        raise SpecError("h, T, and convergence_eps must be positive")
    p0 = np.array(initial.positions)
    if p0.shape[0] != spec.n:
        raise SpecError(f"initial state has {p0.shape[0]} agents, spec has {spec.n}")
    if np.linalg.norm(p0[0] - p0[1]) <= 1e-6 and not allow_collocated:
        raise SpecError(
            "leader and first follower start collocated; the pair would never move "
            "(pass allow_collocated=True to simulate anyway)"
        )
    edges, d2e, tris, s_star, alpha, beta = _pack(spec, gains)
    nsteps = max(int(round(T / h)), 1)
    nbuf = nsteps // decimation + 2
    n = spec.n
    times = np.empty(nbuf)
    pos_buf = np.empty((nbuf, n, 2))
    z_buf = np.empty((nbuf, len(edges)))
    s_buf = np.empty((nbuf, len(tris)))
    v_buf = np.empty(nbuf)
    p = p0.copy()
    count, steps, status, consec_both, consec_z, t_thresh = _kernels.run_kernel(
        p,
        h,
        nsteps,
        decimation,
        convergence_eps,
        sustain,
        edges,
        d2e,
        tris,
        s_star,
        alpha,
        beta,
        times,
        pos_buf,
        z_buf,
        s_buf,
        v_buf,
    )
    traj = Trajectory(
        times=times[:count].copy(),
        positions=pos_buf[:count].copy(),
        z=z_buf[:count].copy(),
        areas=s_buf[:count].copy(),
        potential=v_buf[:count].copy(),
    )
    final_max_z = float(np.max(np.abs(traj.z[-1]))) if traj.z.shape[1] else 0.0
    final_max_s = float(np.max(np.abs(traj.areas[-1]))) if traj.areas.shape[1] else 0.0
    if status == 3:
        verdict = VERDICT_DIVERGED
    elif consec_both >= sustain:
        final = Framework(spec.graph, traj.positions[-1])
        ok = strongly_congruent(
            final, spec.desired_framework(), spec.triangles, tol=congruence_tol
        )
        verdict = VERDICT_STRONG if ok else VERDICT_OTHER
    elif consec_z >= sustain:
        verdict = VERDICT_OTHER
    else:
        verdict = VERDICT_NOT
    return SimulationResult(
        trajectory=traj,
        verdict=verdict,
        final_max_z=final_max_z,
        final_max_area=final_max_s,
        time_to_threshold=t_thresh if t_thresh >= 0 else None,
        steps=steps,
        h=h,
    )

"""Scenario configs, batch running, and file outputs.

A scenario is a JSON document (``"version": 1``) naming the formation
spec (by coordinates or by distances + orientations), the gain policy
(auto-synthesized or explicit), the initial conditions (explicit or
random), and the integrator settings.  Runs write a trajectory CSV, an
errors CSV, and a summary JSON; sweeps aggregate many seeded runs.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import (
    DEFAULT_EPS,
    DEFAULT_HORIZON,
    DEFAULT_STEP,
    VERDICT_DIVERGED,
    VERDICT_STRONG,
    AgentState,
    SimulationResult,
    simulate,
)
from .errors import ConfigError
from .gains import GainSchedule, recommended_schedule
from .geometry import FormationSpec, area_vector, strongly_congruent
from .graphs import Framework, build_lff

THREADS_ENV = "FORMCTL_THREADS"

EXIT_OK = 0
EXIT_INVALID_SPEC = 2
EXIT_NOT_CONVERGED = 3
EXIT_DIVERGED = 4
EXIT_IO = 64

_FMT = "%.17g"  # bit-faithful round-trip for doubles


@dataclass(frozen=True)
class GainPolicy:
    mode: str  # "auto" | "explicit"
    alpha: float = 1.0
    margin: float = 0.1
    alphas: dict[int, float] = field(default_factory=dict)
    betas: dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class InitialPolicy:
    mode: str  # "explicit" | "random"
    positions: Optional[tuple[tuple[float, float], ...]] = None
    box: tuple[float, float] = (-5.0, 5.0)
    seed: int = 0
    count: int = 1


@dataclass(frozen=True)
class IntegratorConfig:
    h: float = DEFAULT_STEP
    T: float = DEFAULT_HORIZON
    convergence_eps: float = DEFAULT_EPS
    decimation: int = 10

    def __post_init__(self):
        if not (self.h > 0 and self.T > 0 and self.convergence_eps > 0):
            raise ConfigError("h, T, and convergence_eps must be positive")
        if self.decimation < 1:
            raise ConfigError("decimation must be >= 1")


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    attachments: tuple[tuple[int, int], ...]
    coordinates: Optional[tuple[tuple[float, float], ...]]
    distances: Optional[dict[tuple[int, int], float]]
    orientations: Optional[dict[tuple[int, int, int], int]]
    gains: GainPolicy
    initial: InitialPolicy
    integrator: IntegratorConfig
    out_dir: str = "out"

    def __post_init__(self):
        if (self.coordinates is None) == (self.distances is None):
            raise ConfigError(
                "spec must give exactly one of 'coordinates' or 'distances'"
            )
        if self.distances is not None and self.orientations is None:
            raise ConfigError("distance-authored specs need 'orientations'")
        if self.gains.mode not in ("auto", "explicit"):
            raise ConfigError(f"unknown gain mode {self.gains.mode!r}")
        if self.initial.mode not in ("explicit", "random"):
            raise ConfigError(f"unknown initial-condition mode {self.initial.mode!r}")
        if self.initial.mode == "explicit" and self.initial.positions is None:
            raise ConfigError("explicit initial conditions need 'positions'")

    # -- JSON --------------------------------------------------------------

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ScenarioConfig":
        if doc.get("version") != 1:
            raise ConfigError(f"unsupported config version {doc.get('version')!r}")
        try:
            spec = doc["spec"]
            n = int(spec["n"])
            attachments = tuple((int(a), int(b)) for a, b in spec.get("attachments", []))
            coordinates = (
                tuple((float(x), float(y)) for x, y in spec["coordinates"])
                if "coordinates" in spec
                else None
            )
            distances = (
                {_parse_pair(k): float(v) for k, v in spec["distances"].items()}
                if "distances" in spec
                else None
            )
            orientations = (
                {_parse_triple(k): int(v) for k, v in spec["orientations"].items()}
                if "orientations" in spec
                else None
            )
            g = doc.get("gains", {"mode": "auto"})
            gains = GainPolicy(
                mode=g.get("mode", "auto"),
                alpha=float(g.get("alpha", 1.0)),
                margin=float(g.get("margin", 0.1)),
                alphas={int(k): float(v) for k, v in g.get("alphas", {}).items()},
                betas={int(k): float(v) for k, v in g.get("betas", {}).items()},
            )
            i = doc.get("initial", {"mode": "random"})
            initial = InitialPolicy(
                mode=i.get("mode", "random"),
                positions=(
                    tuple((float(x), float(y)) for x, y in i["positions"])
                    if "positions" in i
                    else None
                ),
                box=tuple(i.get("box", (-5.0, 5.0))),
                seed=int(i.get("seed", 0)),
                count=int(i.get("count", 1)),
            )
            integ = doc.get("integrator", {})
            integrator = IntegratorConfig(
                h=float(integ.get("h", DEFAULT_STEP)),
                T=float(integ.get("T", DEFAULT_HORIZON)),
                convergence_eps=float(integ.get("convergence_eps", DEFAULT_EPS)),
                decimation=int(integ.get("decimation", 10)),
            )
            out_dir = doc.get("output", {}).get("dir", "out")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        return cls(
            n=n,
            attachments=attachments,
            coordinates=coordinates,
            distances=distances,
            orientations=orientations,
            gains=gains,
            initial=initial,
            integrator=integrator,
            out_dir=out_dir,
        )

    def to_json_dict(self) -> dict:
        spec: dict = {"n": self.n, "attachments": [list(a) for a in self.attachments]}
        if self.coordinates is not None:
            spec["coordinates"] = [list(c) for c in self.coordinates]
        if self.distances is not None:
            spec["distances"] = {f"{j}-{i}": d for (j, i), d in self.distances.items()}
        if self.orientations is not None:
            spec["orientations"] = {
                f"{i}-{j}-{k}": o for (i, j, k), o in self.orientations.items()
            }
        gains: dict = {"mode": self.gains.mode}
        if self.gains.mode == "auto":
            gains.update(alpha=self.gains.alpha, margin=self.gains.margin)
        else:
            gains.update(
                alphas={str(k): v for k, v in self.gains.alphas.items()},
                betas={str(k): v for k, v in self.gains.betas.items()},
            )
        initial: dict = {"mode": self.initial.mode}
        if self.initial.positions is not None:
            initial["positions"] = [list(p) for p in self.initial.positions]
        if self.initial.mode == "random":
            initial.update(
                box=list(self.initial.box),
                seed=self.initial.seed,
                count=self.initial.count,
            )
        return {
            "version": 1,
            "spec": spec,
            "gains": gains,
            "initial": initial,
            "integrator": asdict(self.integrator),
            "output": {"dir": self.out_dir},
        }

    @classmethod
    def load(cls, path: str | Path) -> "ScenarioConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"invalid JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config root in {path} must be a JSON object")
        return cls.from_json_dict(doc)

    # -- materialization ---------------------------------------------------

    def formation_spec(self) -> FormationSpec:
        graph = build_lff(self.n, list(self.attachments))
        if self.coordinates is not None:
            return FormationSpec.from_coordinates(graph, self.coordinates)
        return FormationSpec.from_distances(graph, self.distances, self.orientations)

    def gain_schedule(self, spec: FormationSpec) -> GainSchedule:
        if self.gains.mode == "auto":
            return recommended_schedule(
                spec, alpha=self.gains.alpha, margin=self.gains.margin
            )
        return GainSchedule(alphas=dict(self.gains.alphas), betas=dict(self.gains.betas))

    def initial_state(self, spec: FormationSpec, seed: Optional[int] = None) -> AgentState:
        if self.initial.mode == "explicit":
            return AgentState(np.array(self.initial.positions, dtype=float))
        return sample_initial_state(
            spec.n, self.initial.box, self.initial.seed if seed is None else seed
        )


def _parse_pair(key: str) -> tuple[int, int]:
    a, b = (int(x) for x in key.split("-"))
    return (a, b)


def _parse_triple(key: str) -> tuple[int, int, int]:
    i, j, k = (int(x) for x in key.split("-"))
    return (i, j, k)


def sample_initial_state(n: int, box: tuple[float, float], seed: int) -> AgentState:
    """Uniform positions in the box; resamples the first follower if it
    lands on top of the leader."""
    rng = np.random.default_rng(seed)
    lo, hi = box
    pos = rng.uniform(lo, hi, size=(n, 2))
    while np.linalg.norm(pos[1] - pos[0]) <= 1e-6:
        pos[1] = rng.uniform(lo, hi, size=2)
    return AgentState(pos)


@dataclass(frozen=True)
class RunSummary:
    verdict: str
    final_max_z: float
    final_max_area: float
    time_to_threshold: Optional[float]
    seed: Optional[int]
    h: float
    steps: int
    retried: bool
    gain_table: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return asdict(self)


def _gain_table(schedule: GainSchedule) -> tuple[dict, ...]:
    return tuple(
        {
            "triangle": list(info.triangle),
            "d_ji": info.d_ji,
            "d_ki": info.d_ki,
            "d_kj": info.d_kj,
            "shape_ratio": info.shape_ratio,
            "branch": info.branch,
            "bound": info.bound,
            "gamma_bar": info.gamma_bar,
            "ratio": info.ratio,
        }
        for info in schedule.table
    )


def run_scenario(
    config: ScenarioConfig,
    seed: Optional[int] = None,
    allow_collocated: bool = False,
) -> tuple[SimulationResult, RunSummary]:
    """One seeded run; halves the step and retries once if it diverges."""
    spec = config.formation_spec()
    schedule = config.gain_schedule(spec)
    initial = config.initial_state(spec, seed=seed)
    integ = config.integrator
    result = simulate(
        spec,
        schedule,
        initial,
        h=integ.h,
        T=integ.T,
        convergence_eps=integ.convergence_eps,
        decimation=integ.decimation,
        allow_collocated=allow_collocated,
    )
    retried = False
    if result.verdict == VERDICT_DIVERGED:
        retried = True
        result = simulate(
            spec,
            schedule,
            initial,
            h=integ.h / 2.0,
            T=integ.T,
            convergence_eps=integ.convergence_eps,
            decimation=integ.decimation,
            allow_collocated=allow_collocated,
        )
    summary = RunSummary(
        verdict=result.verdict,
        final_max_z=result.final_max_z,
        final_max_area=result.final_max_area,
        time_to_threshold=result.time_to_threshold,
        seed=seed if seed is not None else (
            config.initial.seed if config.initial.mode == "random" else None
        ),
        h=result.h,
        steps=result.steps,
        retried=retried,
        gain_table=_gain_table(schedule),
    )
    return result, summary


@dataclass(frozen=True)
class SweepSummary:
    count: int
    verdicts: dict[str, int]
    failing_seeds: tuple[int, ...]
    worst_time_to_threshold: Optional[float]
    runs: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return asdict(self)

    @property
    def all_strong(self) -> bool:
        return self.verdicts.get(VERDICT_STRONG, 0) == self.count


def run_sweep(config: ScenarioConfig, threads: Optional[int] = None) -> SweepSummary:
    """Run ``count`` seeded simulations concurrently and aggregate verdicts.

    Run i uses seed ``base_seed + i``; results are joined in seed order,
    so the aggregate is independent of scheduling.
    """
    if config.initial.mode != "random":
        raise ConfigError("sweeps need random initial conditions")
    count = config.initial.count
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else min(8, os.cpu_count() or 1)
    threads = max(threads, 1)
    seeds = [config.initial.seed + i for i in range(count)]
    summaries: list[Optional[RunSummary]] = [None] * count

    def worker(idx: int) -> None:
        _, summary = run_scenario(config, seed=seeds[idx])
        summaries[idx] = summary

    if count:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(worker, range(count)))
    verdicts: dict[str, int] = {}
    failing = []
    worst: Optional[float] = None
    for sd, summary in zip(seeds, summaries):
        verdicts[summary.verdict] = verdicts.get(summary.verdict, 0) + 1
        if summary.verdict != VERDICT_STRONG:
            failing.append(sd)
        if summary.time_to_threshold is not None:
            worst = (
                summary.time_to_threshold
                if worst is None
                else max(worst, summary.time_to_threshold)
            )
    return SweepSummary(
        count=count,
        verdicts=verdicts,
        failing_seeds=tuple(failing),
        worst_time_to_threshold=worst,
        runs=tuple(
            {
                "seed": sd,
                "verdict": s.verdict,
                "final_max_z": s.final_max_z,
                "final_max_area": s.final_max_area,
                "time_to_threshold": s.time_to_threshold,
            }
            for sd, s in zip(seeds, summaries)
        ),
    )


# -- file outputs ----------------------------------------------------------


def write_trajectory_csv(path: str | Path, result: SimulationResult) -> None:
    traj = result.trajectory
    n = traj.positions.shape[1]
    header = ["t"]
    for q in range(1, n + 1):
        header += [f"p{q}x", f"p{q}y"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, pos in zip(traj.times, traj.positions):
            w.writerow([_FMT % t] + [_FMT % v for v in pos.reshape(-1)])


def write_errors_csv(
    path: str | Path, result: SimulationResult, spec: FormationSpec
) -> None:
    traj = result.trajectory
    header = (
        ["t"]
        + [f"z_{j}{i}" for j, i in spec.graph.edges]
        + [f"s_{i}{j}{k}" for i, j, k in spec.triangles]
    )
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, z, s in zip(traj.times, traj.z, traj.areas):
            w.writerow([_FMT % t] + [_FMT % v for v in z] + [_FMT % v for v in s])


def read_trajectory_csv(path: str | Path, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(times, positions) from a trajectory CSV; validates the header shape."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read trajectory {path}: {exc}") from exc
    if not rows or len(rows[0]) != 1 + 2 * n:
        raise ConfigError(
            f"trajectory {path} must have {1 + 2 * n} columns for n={n}"
        )
    times = []
    positions = []
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != 1 + 2 * n:
            raise ConfigError(f"trajectory {path}: truncated row at line {ln}")
        try:
            vals = [float(v) for v in row]
        except ValueError as exc:
            raise ConfigError(f"trajectory {path}: bad number at line {ln}: {exc}") from exc
        times.append(vals[0])
        positions.append(np.array(vals[1:]).reshape(n, 2))
    if not times:
        raise ConfigError(f"trajectory {path} has no data rows")
    return np.array(times), np.array(positions)


def check_trajectory(
    spec: FormationSpec, positions: np.ndarray, tol: float = 1e-5
) -> tuple[bool, dict]:
    """Independent strong-congruence verdict on a final framework.

    Recomputes edge-length equivalence and the signed-area vector match
    against the desired embedding, without any simulator bookkeeping.
    """
    final = Framework(spec.graph, positions)
    desired = spec.desired_framework()
    ok = strongly_congruent(final, desired, spec.triangles, tol=tol)
    chi_final = area_vector(final, spec.triangles)
    chi_desired = area_vector(desired, spec.triangles)
    detail = {
        "strongly_congruent": bool(ok),
        "max_edge_sq_error": max(
            (
                abs(
                    float(np.sum((positions[j - 1] - positions[i - 1]) ** 2))
                    - spec.distance(j, i) ** 2
                )
                for j, i in spec.graph.edges
            ),
            default=0.0,
        ),
        "area_vector": [float(v) for v in chi_final],
        "desired_area_vector": [float(v) for v in chi_desired],
    }
    return ok, detail


def write_json(path: str | Path, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def verdict_exit_code(verdict: str) -> int:
    if verdict == VERDICT_STRONG:
        return EXIT_OK
    if verdict == VERDICT_DIVERGED:
        return EXIT_DIVERGED
    return EXIT_NOT_CONVERGED

"""Command-line front end: validate / gains / simulate / sweep / check."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .errors import ConfigError, SpecError
from .harness import (
    EXIT_INVALID_SPEC,
    EXIT_IO,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    ScenarioConfig,
    check_trajectory,
    read_trajectory_csv,
    run_scenario,
    run_sweep,
    verdict_exit_code,
    write_errors_csv,
    write_json,
    write_trajectory_csv,
)
from .geometry import triangle_shape_condition


def _load_config(path: str) -> ScenarioConfig:
    return ScenarioConfig.load(path)


def _triangle_rows(spec):
    rows = []
    for tri in spec.triangles:
        d_ji, d_ki, d_kj = spec.triangle_sides(tri)
        ratio = abs(d_ki**2 - d_kj**2) / d_ji**2
        rows.append((tri, d_ji, d_ki, d_kj, ratio, triangle_shape_condition(d_ji, d_ki, d_kj)))
    return rows


def cmd_validate(args) -> int:
    config = _load_config(args.config)
    try:
        spec = config.formation_spec()
    except SpecError as exc:
        print(f"spec invalid: {exc}")
        return EXIT_INVALID_SPEC
    limit = 2.0 * math.sqrt(2.0)
    print(f"graph: n={spec.n}, edges={len(spec.graph.edges)} (2n-3={2 * spec.n - 3}): ok")
    bad = []
    print(f"{'triangle':>12} {'d_ji':>8} {'d_ki':>8} {'d_kj':>8} {'shape':>9}  ok (< {limit:.4f})")
    for tri, d_ji, d_ki, d_kj, ratio, ok in _triangle_rows(spec):
        print(
            f"{str(tri):>12} {d_ji:8.4f} {d_ki:8.4f} {d_kj:8.4f} {ratio:9.4f}  "
            + ("pass" if ok else "FAIL")
        )
        if not ok:
            bad.append(tri)
    if bad:
        print("shape condition failed for triangles: " + ", ".join(map(str, bad)))
        return EXIT_INVALID_SPEC
    print("spec valid")
    return EXIT_OK


def cmd_gains(args) -> int:
    config = _load_config(args.config)
    try:
        spec = config.formation_spec()
        schedule = config.gain_schedule(spec)
    except SpecError as exc:
        print(f"spec invalid: {exc}")
        return EXIT_INVALID_SPEC
    print(f"{'triangle':>12} {'branch':>10} {'gamma_bar':>10} {'bound':>10} {'beta/alpha':>11}")
    for info in schedule.table:
        gb = "-" if info.gamma_bar is None else f"{info.gamma_bar:.6g}"
        print(
            f"{str(info.triangle):>12} {info.branch:>10} {gb:>10} "
            f"{info.bound:10.6g} {info.ratio:11.6g}"
        )
    if not schedule.table:
        print("(no ordinary followers; nothing to bound)")
    out_dir = Path(args.out or config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = {
        "alphas": {str(k): v for k, v in schedule.alphas.items()},
        "betas": {str(k): v for k, v in schedule.betas.items()},
        "table": [
            {
                "triangle": list(i.triangle),
                "branch": i.branch,
                "gamma_bar": i.gamma_bar,
                "bound": i.bound,
                "ratio": i.ratio,
            }
            for i in schedule.table
        ],
    }
    write_json(out_dir / "gains.json", doc)
    print(f"wrote {out_dir / 'gains.json'}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    try:
        result, summary = run_scenario(
            config, seed=args.seed, allow_collocated=args.override_collocated
        )
    except SpecError as exc:
        print(f"refused: {exc}")
        return EXIT_INVALID_SPEC
    spec = config.formation_spec()
    out_dir = Path(args.out or config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(out_dir / "trajectory.csv", result)
    write_errors_csv(out_dir / "errors.csv", result, spec)
    write_json(out_dir / "summary.json", summary.to_json_dict())
    print(
        f"verdict: {summary.verdict}  final |z|={summary.final_max_z:.3g} "
        f"|area err|={summary.final_max_area:.3g}  t_threshold={summary.time_to_threshold}"
    )
    print(f"wrote {out_dir}/trajectory.csv, errors.csv, summary.json")
    return verdict_exit_code(summary.verdict)


def cmd_sweep(args) -> int:
    config = _load_config(args.config)
    try:
        agg = run_sweep(config)
    except SpecError as exc:
        print(f"refused: {exc}")
        return EXIT_INVALID_SPEC
    out_dir = Path(args.out or config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(out_dir / "sweep.json", agg.to_json_dict())
    print(f"runs: {agg.count}  verdicts: {agg.verdicts}")
    if agg.failing_seeds:
        print(f"failing seeds: {list(agg.failing_seeds)}")
    print(f"worst time-to-threshold: {agg.worst_time_to_threshold}")
    print(f"wrote {out_dir / 'sweep.json'}")
    return EXIT_OK if agg.all_strong else EXIT_NOT_CONVERGED


def cmd_check(args) -> int:
    config = _load_config(args.config)
    try:
        spec = config.formation_spec()
    except SpecError as exc:
        print(f"spec invalid: {exc}")
        return EXIT_INVALID_SPEC
    _, positions = read_trajectory_csv(args.trajectory, spec.n)
    ok, detail = check_trajectory(spec, positions[-1])
    print(f"strong congruence: {'yes' if ok else 'no'}")
    print(f"max |edge squared-length error|: {detail['max_edge_sq_error']:.3g}")
    print(f"area vector:    {['%.6g' % v for v in detail['area_vector']]}")
    print(f"desired vector: {['%.6g' % v for v in detail['desired_area_vector']]}")
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formctl",
        description="Distance + signed-area formation control: validation, "
        "gain synthesis, and closed-loop simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="scenario config JSON")
        p.add_argument("--out", default=None, help="output directory")
        return p

    add_common(sub.add_parser("validate", help="check graph and triangle conditions"))
    add_common(sub.add_parser("gains", help="synthesize and print the gain schedule"))
    p_sim = add_common(sub.add_parser("simulate", help="run one closed-loop simulation"))
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument(
        "--override-collocated",
        action="store_true",
        help="simulate even if leader and first follower start collocated",
    )
    add_common(sub.add_parser("sweep", help="run a batch of seeded simulations"))
    p_chk = add_common(sub.add_parser("check", help="re-verify a trajectory file"))
    p_chk.add_argument("--trajectory", required=True, help="trajectory CSV to check")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "gains": cmd_gains,
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
        "check": cmd_check,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

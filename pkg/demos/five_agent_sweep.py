"""Batch verification of a 5-agent chain-of-triangles formation.

Builds the scenario programmatically (the same JSON schema the CLI reads),
auto-synthesizes gains, and sweeps a block of seeds.  Every run should end
strongly congruent to the desired formation: same distances, same signed
areas, no mirror-image limits.
"""

import math

from formctl import ScenarioConfig, run_scenario, run_sweep

s3 = math.sqrt(3.0)
config = ScenarioConfig.from_json_dict(
    {
        "version": 1,
        "spec": {
            "n": 5,
            "attachments": [[1, 2], [2, 3], [3, 4]],
            "coordinates": [[0, 0], [2, 0], [1, s3], [3, s3], [2, 2 * s3]],
        },
        "gains": {"mode": "auto", "alpha": 1.0, "margin": 0.1},
        "initial": {"mode": "random", "box": [-5.0, 5.0], "seed": 0, "count": 40},
        "integrator": {"h": 1e-3, "T": 200.0, "convergence_eps": 1e-6, "decimation": 10},
    }
)

# a single run first, with its per-triangle gain table
result, summary = run_scenario(config, seed=0)
print("single run:", summary.verdict,
      f"(final |z| = {summary.final_max_z:.3g}, t_thresh = {summary.time_to_threshold:.2f})")
print("gain table:")
for row in summary.gain_table:
    print(f"  triangle {tuple(row['triangle'])}: {row['branch']:>9} branch,"
          f" bound {row['bound']:.4f}, ratio {row['ratio']:.4f}")

# then the sweep
agg = run_sweep(config)
print(f"\nsweep: {agg.count} runs, verdicts {agg.verdicts}")
print("worst time-to-threshold:", f"{agg.worst_time_to_threshold:.2f}")
if agg.failing_seeds:
    print("failing seeds:", agg.failing_seeds)
else:
    print("all runs strongly congruent")

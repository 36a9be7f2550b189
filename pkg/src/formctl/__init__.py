"""Distance + signed-area formation control for planar single-integrator agents.

Library layout:

- :mod:`formctl.graphs` -- LFF directed formation graphs and rigidity tests
- :mod:`formctl.geometry` -- signed areas, formation specs, congruence predicates
- :mod:`formctl.quartic` -- quartic discriminant tests and real-root isolation
- :mod:`formctl.gains` -- certified gain-ratio synthesis per triangle
- :mod:`formctl.dynamics` -- control law, error signals, RK4 simulation
- :mod:`formctl.harness` -- scenario configs, batch sweeps, file outputs
"""

from .dynamics import (
    AgentState,
    ErrorState,
    SimulationResult,
    Trajectory,
    control,
    errors,
    lyapunov,
    simulate,
    step_rk4,
    z21_closed_form,
)
from .errors import ConfigError, SpecError
from .gains import (
    GainSchedule,
    gain_ratio_lower_bound,
    isosceles_gain_bound,
    recommended_schedule,
    stationary_points,
    stationary_quartic,
)
from .geometry import (
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
from .graphs import (
    DirectedFormationGraph,
    Framework,
    build_lff,
    is_infinitesimally_rigid,
    rigidity_matrix,
    rigidity_rank,
    triangles_of,
    validate_conditions,
)
from .harness import ScenarioConfig, run_scenario, run_sweep
from .quartic import Quartic, discriminant_quantities, has_real_root, real_roots

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "ConfigError",
    "DirectedFormationGraph",
    "ErrorState",
    "FormationSpec",
    "Framework",
    "GainSchedule",
    "Quartic",
    "ScenarioConfig",
    "SimulationResult",
    "SpecError",
    "Trajectory",
    "area_vector",
    "build_lff",
    "congruent",
    "control",
    "desired_area_from_distances",
    "discriminant_quantities",
    "equivalent",
    "errors",
    "gain_ratio_lower_bound",
    "has_real_root",
    "is_infinitesimally_rigid",
    "isosceles_gain_bound",
    "lyapunov",
    "quadrilateral_area",
    "real_roots",
    "recommended_schedule",
    "rigidity_matrix",
    "rigidity_rank",
    "run_scenario",
    "run_sweep",
    "signed_area",
    "simulate",
    "stationary_points",
    "stationary_quartic",
    "step_rk4",
    "strongly_congruent",
    "triangle_shape_condition",
    "triangles_of",
    "validate_conditions",
    "z21_closed_form",
]

"""Joint blocklength and hover-position optimization for a URLLC UAV relay."""

from .model import (
    Allocation,
    Hop,
    ModelDomainError,
    ScenarioParams,
    approx_error,
    exact_error,
    reference_scenario,
)
from .optimizer import (
    Method,
    Solution,
    SolverConfig,
    baseline_fixed_m,
    baseline_fixed_x,
    exhaustive_search,
    joint_optimize,
    optimize_blocklength,
    optimize_location,
)

__version__ = "0.1.0"

"""Simulation and PI control of a quadrotor floating on a water surface."""
from .analysis import StepMetrics, compare_metrics, staircase_metrics, step_metrics
from .actuation import MotorThrusts, SaturationError, allocate, mix, thrust_to_inertial
from .control import (
    PiGains,
    ReferenceSignal,
    SurfaceController,
    pi_step,
    reference_psi_staircase,
    reference_y_step,
    surface_controller,
)
from .core import (
    GeneralizedState,
    InvalidParamsError,
    VehicleParams,
    Wrench,
    equilibrium_state,
    validate_params,
)
from .kinematics import (
    GimbalLockError,
    coriolis_vector,
    euler_rate_matrix,
    euler_rates_from_body,
    generalized_inertia,
    rotation_matrix,
)
from .simulator import SimConfig, Trajectory, impulse_scenario, integrate, state_derivative
from .tuning import NoFeasibleGains, TuningConstraints, tune_gains

__all__ = [
    "StepMetrics",
    "compare_metrics",
    "staircase_metrics",
    "step_metrics",
    "MotorThrusts",
    "SaturationError",
    "allocate",
    "mix",
    "thrust_to_inertial",
    "PiGains",
    "ReferenceSignal",
    "SurfaceController",
    "pi_step",
    "reference_psi_staircase",
    "reference_y_step",
    "surface_controller",
    "GeneralizedState",
    "InvalidParamsError",
    "VehicleParams",
    "Wrench",
    "equilibrium_state",
    "validate_params",
    "GimbalLockError",
    "coriolis_vector",
    "euler_rate_matrix",
    "euler_rates_from_body",
    "generalized_inertia",
    "rotation_matrix",
    "SimConfig",
    "Trajectory",
    "impulse_scenario",
    "integrate",
    "state_derivative",
    "NoFeasibleGains",
    "TuningConstraints",
    "tune_gains",
]

__version__ = "0.1.0"

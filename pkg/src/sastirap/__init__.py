"""Population-transfer simulator for a three-level Lambda system.

Simulates STIRAP and superadiabatic STIRAP (counterdiabatically corrected)
protocols under intermediate-level dissipation and Ornstein-Uhlenbeck
dephasing, with deterministic seeded Monte Carlo ensembles and reproducible
CSV outputs.
"""

__version__ = "0.1.0"

from .ensemble import (
    EnsembleConfig,
    EnsembleResult,
    SweepPanel,
    SweepResult,
    empirical_quantile,
    run_ensemble,
    sweep_amplitude,
    sweep_matrix,
)
from .integrator import (
    IntegrationDivergedError,
    RunConfig,
    RunResult,
    SimGrid,
    Trajectory,
    default_grid,
    simulate_run,
)
from .model import (
    EigenSystem,
    ThreeLevelState,
    build_h0,
    build_hcd,
    build_heps,
    eigensystem,
    mixing_angle,
    populations,
)
from .noise import OUParams, generate_series, sample_stats
from .pulses import ProtocolConfig, PulseFamily, pulse_area, sample_pulses

__all__ = [
    "__version__",
    "EnsembleConfig",
    "EnsembleResult",
    "SweepPanel",
    "SweepResult",
    "empirical_quantile",
    "run_ensemble",
    "sweep_amplitude",
    "sweep_matrix",
    "IntegrationDivergedError",
    "RunConfig",
    "RunResult",
    "SimGrid",
    "Trajectory",
    "default_grid",
    "simulate_run",
    "EigenSystem",
    "ThreeLevelState",
    "build_h0",
    "build_hcd",
    "build_heps",
    "eigensystem",
    "mixing_angle",
    "populations",
    "OUParams",
    "generate_series",
    "sample_stats",
    "ProtocolConfig",
    "PulseFamily",
    "pulse_area",
    "sample_pulses",
]

"""Qubit dynamical maps: Markovianity, phase covariance and monotonicity diagnostics."""

from .errors import (
    ConfigError,
    MissingCutoffError,
    NonHermitianHamiltonianError,
    QuadratureError,
    QubitDynamicsError,
    SingularMapError,
    StepSizeUnderflowError,
    UnphysicalStateError,
)
from .states import (
    bloch_to_density,
    coherence,
    density_to_bloch,
    population,
    pure_state,
    purity,
    trace_distance,
)
from .maps import (
    apply,
    choi,
    compose,
    is_cp,
    is_positive,
    min_choi_eigenvalue,
    phase_covariance_residual,
    propagator,
)
from .generators import (
    LindbladTerm,
    PCRates,
    Rate,
    SpinBosonParams,
    general_generator,
    mimic_pc_rates,
    npc_generator,
    ohmic_rate,
    pc_generator,
    semigroup_rate,
)
from .propagation import (
    IntegratorControls,
    MapTrajectory,
    integrate_map,
    npc_transversal_solution,
    pc_integrals,
    pc_map,
    pc_solution,
    pc_trajectory,
    semigroup_map,
    time_grid,
)
from .diagnostics import blp_witness, cp_divisibility_scan, extrema_profile, pc_scan, verdicts
from .mimicry import compare_mimicry, cp_region_scan

__version__ = "0.1.0"

"""Asymptotic-preserving particle pushers for strongly magnetized plasmas
in torus geometry: field models, semi-implicit IMEX steppers, reference
integrators, limit models, and a verification harness."""

from .config import ExperimentConfig, parse_config
from .diagnostics import (
    ErrorReport,
    InvariantSeries,
    adiabatic_mu,
    invariant_series,
    kinetic_energy_cartesian,
    linf_position_error,
    observed_order,
    rz_projection,
    total_energy,
)
from .dynamics import (
    AugmentedState,
    Epsilon,
    FastState,
    PhysicalState,
    SlowState,
    augmented_from_physical,
    force_parallel,
    limit_drift,
    physical_from_augmented,
    rhs_cartesian,
    rhs_full_toroidal,
    rhs_order1,
    rhs_order2,
    rhs_order2_explicit,
    slow_rhs,
    uperp_drift,
)
from .errors import (
    DegenerateField,
    DomainError,
    InsufficientData,
    IntegrationError,
    MissingData,
    MissingPotential,
    ParseError,
    TimeGridMismatch,
    TorusPusherError,
    ValidationError,
)
from .fields import (
    FieldEval,
    FieldModel,
    GeometryCoefficients,
    ScrewField,
    ScrewFieldParams,
    SolovevField,
    SolovevFieldParams,
    coefficients,
    divergence_check,
    screw_field_eval,
    solovev_field_eval,
)
from .geometry import (
    CartesianPoint,
    FrameTriplet,
    TorusParams,
    ToroidalPoint,
    cartesian_to_toroidal,
    coordinate_frame,
    field_aligned_frame,
    toroidal_to_cartesian,
    velocity_from_field_frame,
    velocity_to_field_frame,
)
from .integrators import (
    SDIRK,
    SdirkConstants,
    StepSize,
    Trajectory,
    boris_step,
    boris_velocity_update,
    imex1_step,
    imex2_step,
    integrate,
    limit1_eff_step,
    limit1_step,
    limit2_eff_step,
    limit2_step,
    rk4_step,
)
from .runner import (
    SweepResult,
    build_field_model,
    emit_plot_scripts,
    initial_state,
    run_single,
    run_sweep,
)

__version__ = "0.1.0"

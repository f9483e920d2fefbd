# -*- coding: utf-8 -*-
"""
弯曲时空中的离散时间量子行走

硬币角度场 θ(T, X) 定义行走；两步频闪行走的连续极限为度规
diag(1, −1/cos²θ) 下的无质量 Dirac 方程。
"""

from .errors import (
    QWGravError,
    InvalidInputError,
    DomainError,
    ConfigurationError,
    GuardTrippedError,
    BoundaryGuardError,
    CFLViolationError,
)
from .coin import (
    FieldKind,
    CoinMatrix,
    CoinAngleField,
    ConstantField,
    SmoothTestField,
    TabulatedField,
    build_coin,
    coin_identity_defect,
    eval_angle,
)
from .walk import (
    LatticeGrid,
    WalkState,
    WalkRun,
    auto_extent,
    init_gaussian,
    step,
    step_s2,
    step_back,
    stroboscope,
    total_probability,
    boundary_probability,
    check_boundary,
    evolve,
)
from .continuum import (
    SpinBasisRotation,
    Metric2D,
    Diad,
    ContinuumState,
    to_eigenbasis,
    from_eigenbasis,
    p_matrix,
    q_matrix,
    pde_residual_LR,
    evolve_pde,
    dirac_norm,
    dirac_residual,
    diad_orthonormality_check,
    characteristic_solution,
)
from .schwarzschild import (
    SchwarzschildParams,
    SchwarzschildField,
    GeodesicTrack,
    TerminationReason,
    DomainLocation,
    radius,
    coin_angle_bh,
    in_domain_D,
    integrate_null_geodesic,
    make_bh_field,
    lemaitre_metric,
    horizon_position,
    singularity_position,
    domain_boundary_position,
    domain_location,
    metric_identification_residual,
)
from .analysis import (
    Branch,
    DensityField,
    PeakTrajectory,
    DeviationReport,
    ConvergenceRow,
    StroboscopeReport,
    smooth_pairs,
    density_field,
    track_peaks,
    geodesic_deviation,
    deviation_by_singularity_distance,
    exits_domain,
    terminates_on_line,
    branch_slope,
    pde_reference_density,
    convergence_study,
    scalar_stroboscope_demo,
)

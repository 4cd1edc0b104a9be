"""Slope limiters in phi-f form, their TVD regions, and a MUSCL advection solver."""

from slopelim.analysis import (
    ConvergenceRow,
    TvAudit,
    convergence_study,
    l1_error,
    total_variation,
    tv_audit,
)
from slopelim.limiters import (
    HIGH_RESOLUTION_KINDS,
    SYMMETRIC_KINDS,
    BoundingSlopes,
    LimiterKind,
    Region,
    RegionReport,
    SpecialPoints,
    bounding_slopes,
    check_region,
    hr_region_bounds,
    phi,
    phi_berger,
    special_points,
    symmetry_defect,
    tvd_region_bounds,
)
from slopelim.mesh import Mesh, StretchRatios, make_stretched, make_uniform, stretch_ratios
from slopelim.reconstruction import (
    LocalDiffs,
    Reconstruction,
    StencilTriple,
    limited_slope,
    local_diffs,
    reference_slope,
)
from slopelim.solver import (
    CflViolation,
    InitialCondition,
    RunResult,
    SimConfig,
    State,
    exact_solution,
    initial_state,
    run,
    stable_dt,
    step,
)

__version__ = "0.1.0"

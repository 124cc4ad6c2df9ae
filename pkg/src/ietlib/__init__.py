"""Exact computation with interval exchange transformations.

Scalars are exact rationals or real quadratic numbers; on top of them sit the
IET object, first-return induction, stack constructions, orbit-separation
record series, and Weyl-sum weak-mixing diagnostics, plus the ``iet`` CLI.
"""

from ._fast import HAVE_COMPILED, kernel_name
from .iet import (
    IET,
    DPrimeHit,
    IdocCollision,
    Interval,
    OrbitWindow,
    Permutation,
    build_iet,
    is_irreducible,
)
from .induction import (
    InducedIET,
    InducedPiece,
    Stack,
    StackTooShort,
    StackViolation,
    StepCapExceeded,
    UndefinedStackError,
    best_rational_below,
    build_tall_stack,
    induce,
    is_basic,
    middle_third,
    return_time,
    stack_from_window,
    translation_constant,
    trim_stack,
    verify_stack,
)
from .scalar import (
    MixedFieldError,
    Scalar,
    ScalarParseError,
    parse_scalar,
    render_scalar,
    to_float,
)
from .separation import (
    PsiRecordSeries,
    ScanResult,
    SeparationProfile,
    default_schedule,
    delta_n,
    evidence_threshold,
    phi_records,
    psi_records,
    rho,
    rho_n,
    rho_prime_n,
    scan_critical,
    separation_profile,
)
from .weyl import (
    BoundaryAverages,
    CocycleSeries,
    EpsilonTooLarge,
    WeylPeak,
    WeylScan,
    boundary_averages,
    eigenvalue_scan,
    visit_counts,
    weyl_grid,
    weyl_value,
)

__version__ = "0.1.0"

__all__ = [
    "IET", "Permutation", "Interval", "OrbitWindow", "IdocCollision", "DPrimeHit",
    "build_iet", "is_irreducible",
    "Scalar", "parse_scalar", "render_scalar", "to_float",
    "ScalarParseError", "MixedFieldError",
    "InducedIET", "InducedPiece", "Stack", "StackViolation",
    "StepCapExceeded", "StackTooShort", "UndefinedStackError",
    "induce", "return_time", "is_basic", "translation_constant",
    "stack_from_window", "verify_stack", "build_tall_stack",
    "middle_third", "trim_stack", "best_rational_below",
    "SeparationProfile", "PsiRecordSeries", "ScanResult",
    "rho", "rho_n", "delta_n", "rho_prime_n", "separation_profile",
    "psi_records", "phi_records", "scan_critical",
    "default_schedule", "evidence_threshold",
    "CocycleSeries", "WeylScan", "WeylPeak", "BoundaryAverages", "EpsilonTooLarge",
    "visit_counts", "weyl_value", "weyl_grid", "eigenvalue_scan", "boundary_averages",
    "HAVE_COMPILED", "kernel_name",
]

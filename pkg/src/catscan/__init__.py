"""Simulation of conditional optical cat states and their homodyne tomography."""

from .circuit import (
    BellState,
    CatSpec,
    HybridState,
    PolarizationState,
    append_diagonal_photon,
    bell_state,
    cat_branch_overlap,
    conditional_project,
    diagonal_basis_amplitudes,
    entangle_kerr,
    kerr_two_photon_gate,
    make_cat,
    make_ghz,
    measurement_probabilities,
)
from .errors import (
    CatscanError,
    DimensionMismatch,
    InvalidArgument,
    RegionError,
    SymmetryViolation,
    TruncationError,
    ZeroNorm,
)
from .experiment import (
    MinimumReport,
    NoiseSpec,
    default_n_max,
    find_minimum,
    monte_carlo_study,
    perturb,
)
from .fock import (
    FockVector,
    coherent_state,
    displace,
    inner_product,
    mean_photon_number,
    normalize,
    number_state,
    parity_expectation,
    superpose,
    vacuum,
)
from .quadrature import (
    QuadratureTable,
    build_table,
    default_phases,
    default_x_grid,
    quadrature_distribution,
    quadrature_wavefunctions,
)
from .tomography import (
    ReconstructionConfig,
    extend_phases,
    filter_kernel,
    filter_kernel_numeric,
    fit_slices,
    reconstruct,
    reconstruct_at,
)
from .wigner import (
    PAPER_SCALE,
    REFERENCE_MINIMA,
    ReferenceMinimum,
    WignerGrid,
    calibrate_display_scale,
    cat_wigner_terms,
    convention_factor,
    evaluate_grid,
    published_branch_weight,
    wigner_displaced_parity,
    wigner_superposition,
)

__version__ = "0.1.0"

__all__ = [
    "BellState",
    "CatSpec",
    "CatscanError",
    "DimensionMismatch",
    "FockVector",
    "HybridState",
    "InvalidArgument",
    "MinimumReport",
    "NoiseSpec",
    "PAPER_SCALE",
    "PolarizationState",
    "QuadratureTable",
    "REFERENCE_MINIMA",
    "ReconstructionConfig",
    "ReferenceMinimum",
    "RegionError",
    "SymmetryViolation",
    "TruncationError",
    "WignerGrid",
    "ZeroNorm",
    "append_diagonal_photon",
    "bell_state",
    "build_table",
    "calibrate_display_scale",
    "cat_branch_overlap",
    "cat_wigner_terms",
    "coherent_state",
    "conditional_project",
    "convention_factor",
    "default_n_max",
    "default_phases",
    "default_x_grid",
    "diagonal_basis_amplitudes",
    "displace",
    "entangle_kerr",
    "evaluate_grid",
    "extend_phases",
    "filter_kernel",
    "filter_kernel_numeric",
    "find_minimum",
    "fit_slices",
    "inner_product",
    "kerr_two_photon_gate",
    "make_cat",
    "make_ghz",
    "mean_photon_number",
    "measurement_probabilities",
    "monte_carlo_study",
    "normalize",
    "number_state",
    "parity_expectation",
    "perturb",
    "published_branch_weight",
    "quadrature_distribution",
    "quadrature_wavefunctions",
    "reconstruct",
    "reconstruct_at",
    "superpose",
    "vacuum",
    "wigner_displaced_parity",
    "wigner_superposition",
]

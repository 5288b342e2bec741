"""Basis, bibasis, unconditional and absolute constants of finite sections
of classical systems in finite-dimensional Banach lattices.

The library represents step-function systems (Haar, Rademacher, Walsh,
summing and difference bases, blockwise Rademacher discretizations, tent
functions) exactly on dyadic grids, evaluates the partial-sum ratio
functionals behind the basis (K), bibasis (M), unconditional-bibasis (L),
unconditional (Ku) and absolute (A) constants, searches for extremal
witnesses, and runs a suite of quantitative checks against the classical
bounds (Doob, square-function equivalences, Khintchine, perturbation and
block stability).
"""

from .lattice import (
    LVec,
    Space,
    SpaceMismatchError,
    dyadic,
    lp_n,
    make_space,
    maximal_function,
    modulus,
    norm,
    partial_sum_envelope,
    pointwise_pow,
    square_function,
    sup,
)
from .systems import (
    SignMatrix,
    System,
    absolute_matrix_example,
    difference_basis,
    discretized_rademacher,
    haar,
    hadamard,
    lvec_from_csv,
    lvec_to_csv,
    rademacher,
    schauder_c01,
    sign_matrix_to_csv,
    subsequence,
    summing_basis,
    system_from_csv,
    system_to_csv,
    unit_vectors,
    walsh,
    walsh_matrix,
)
from .constants import (
    ConstantEstimate,
    ConstantKind,
    DegenerateSystemError,
    Witness,
    block_system,
    distortion_vs_lp,
    estimate_constant,
    permuted_estimate,
    perturbation_theta,
    ratio,
)
from .checks import CheckOutcome, SuiteConfig, list_checks, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lattice
    "Space", "LVec", "SpaceMismatchError", "make_space", "lp_n", "dyadic",
    "norm", "modulus", "sup", "pointwise_pow", "partial_sum_envelope",
    "maximal_function", "square_function",
    # systems
    "System", "SignMatrix", "unit_vectors", "summing_basis",
    "difference_basis", "haar", "rademacher", "hadamard", "walsh_matrix",
    "walsh", "discretized_rademacher", "absolute_matrix_example",
    "schauder_c01", "subsequence", "system_to_csv", "system_from_csv",
    "lvec_to_csv", "lvec_from_csv", "sign_matrix_to_csv",
    # constants
    "ConstantKind", "ConstantEstimate", "Witness", "DegenerateSystemError",
    "ratio", "estimate_constant", "permuted_estimate", "block_system",
    "distortion_vs_lp", "perturbation_theta",
    # checks
    "CheckOutcome", "SuiteConfig", "run_suite", "run_check", "list_checks",
]

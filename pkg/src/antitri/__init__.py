"""Antitriangular factorizations of skew-symmetric and skew-Hermitian matrices."""

__version__ = "0.1.0"

from .arrowhead import arrowhead_pattern_ok, arrowhead_permutation, to_multi_arrowhead, zero_first_row_odd
from .complex_atf import (
    BlockAtfResult,
    Inertia,
    block_atf_hermitian,
    block_atf_skew_hermitian,
    hermitian_eigensolve,
    inertia_hermitian,
    inertia_skew_hermitian,
)
from .errors import (
    AntitriError,
    ConvergenceError,
    DefiniteMatrixError,
    DegenerateInputError,
    NotHermitianError,
    NotSkewSymmetricError,
    StructureError,
)
from .givens import antidiagonal_deflate, det_antitriangular, rank_antitriangular, reduce_givens
from .householder import atf_pivoted, atf_rank_revealing, reconstruct_q, store_reflectors
from .matcore import (
    AtfResult,
    GivensRotation,
    HouseholderReflector,
    default_tol,
    flip_antitriangular,
    givens_from_pair,
    skew_check,
    skew_symmetrize,
)
from .matgen import MurnaghanSpec, generate, murnaghan, rank_experiment_suite

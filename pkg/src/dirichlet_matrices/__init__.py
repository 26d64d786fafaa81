"""Dirichlet-series matrices A_n = W_n + D_n: determinants, characteristic
polynomials and spectra, with a fast v(n,k) engine for the Redheffer case."""

from .dirichlet import (
    CoefficientSequence,
    DnkTable,
    d_table,
    dirichlet_convolve,
    dirichlet_inverse,
    mertens_table,
    mobius_sieve,
)
from .errors import CapExceededError, ConvergenceError, InputError, SpectrumStructureError
from .matrices import DenseMatrix, WeightVector, build_A, build_D, build_E, build_W, matrix_product
from .oracle import IntegerPolynomial, charpoly_exact, det_exact, eig_residual
from .spectra import (
    EigvecReport,
    ShiftedCharPoly,
    SpectrumReport,
    classify_spectrum,
    det_from_vnk,
    det_weighted,
    eigenvector_left,
    eigenvector_right,
    shifted_charpoly,
    solve_roots,
    spectrum,
)
from .vnk import (
    FloorValueSet,
    VnkTable,
    cached_vnk_fast,
    floor_value_set,
    load_vnk_table,
    save_vnk_table,
    split_point,
    vl_nk,
    vnk_fast,
    vnk_lattice,
    vnk_lattice_table,
    vnk_naive,
)

__version__ = "0.1.0"

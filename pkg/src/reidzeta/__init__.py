"""reidzeta: exact coincidence Reidemeister numbers and zeta functions.

Computes R(phi^n, psi^n) for endomorphism pairs on S-arithmetic abelian
groups Z[1/S]^d and on torsion-free nilpotent groups given by their abelian
factor data, assembles the coincidence zeta function exactly, and classifies
it as rational or natural-boundary via the p-adic valuation criterion.
"""

from .arith import BigRat, IntMat, PadicVal, padic_valuation, smith_normal_form
from .engine import RValue, abelian_r, nilpotent_r, r_sequence, tameness_check
from .groups import (
    EndoPair,
    NilpotentFactor,
    NilpotentGroupData,
    SArithAbelianGroup,
    validate,
)
from .spectra import (
    EigenPair,
    EigenPairProfile,
    ExternalEigenData,
    ExternalEigenPair,
    commuting_check,
    eigen_profile,
    joint_eigenvalues,
)
from .zeta import (
    DichotomyVerdict,
    RationalForm,
    ZetaSeries,
    classify_dichotomy,
    detect_linear_recurrence,
    gf_decomposition,
    zeta_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "BigRat",
    "DichotomyVerdict",
    "EigenPair",
    "EigenPairProfile",
    "EndoPair",
    "ExternalEigenData",
    "ExternalEigenPair",
    "IntMat",
    "NilpotentFactor",
    "NilpotentGroupData",
    "PadicVal",
    "RValue",
    "RationalForm",
    "SArithAbelianGroup",
    "ZetaSeries",
    "abelian_r",
    "classify_dichotomy",
    "commuting_check",
    "detect_linear_recurrence",
    "eigen_profile",
    "gf_decomposition",
    "joint_eigenvalues",
    "nilpotent_r",
    "padic_valuation",
    "r_sequence",
    "smith_normal_form",
    "tameness_check",
    "validate",
    "zeta_coefficients",
]

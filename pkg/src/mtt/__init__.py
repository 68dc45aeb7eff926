"""Decide and certify unitary equivalence of a complex matrix to its transpose.

The main entry points are :func:`is_uet`, :func:`is_uecsm`, :func:`is_ueasm`
and :func:`decompose_canonical`.
"""
from .antilinear import Anticonjugation, AsmShape, Conjugation, realize_asm, realize_csm
from .canonical import CanonicalDecomposition, Summand, decompose_canonical, global_symmetric_realization
from .commutant import decompose_irreducibles, hermitian_commutant, is_irreducible, split_once
from .errors import MttError, NotUET, Undetermined
from .gallery import GeneratorSpec, generate, regression_vectors
from .intertwiner import (
    NO,
    UNDETERMINED,
    YES,
    Decision,
    UetCertificate,
    classify_irreducible_uet,
    is_uecsm,
    is_ueasm,
    is_uet,
    verify_certificate,
)
from .linalg import DEFAULT_TOL, ToleranceConfig
from .words import specht_bounded, uecsm_test_3x3

__version__ = "0.1.0"

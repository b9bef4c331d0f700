"""pgl2-whittaker: exact finite-level computations for a cuspidal representation of PGL_2(F_p((t))).

The representation is induced from the character chi of A = I0 x| <sigma>. Sections are stored
by their values on the orbit representatives R_(n,k), and the Whittaker transform phi is an
exact matrix over Q(zeta_p):

    from pgl2_whittaker import LevelParams, kernel_matrix, phi_matrix

    level = LevelParams(p=3, k=2, n=0)
    assert phi_matrix(level).entries == kernel_matrix(level).entries

Claims about the construction are checked by the suites in :mod:`pgl2_whittaker.harness`, also
reachable as ``pgl2-whittaker verify <claim|all>``.
"""

from pgl2_whittaker.api import build_matrix, dump_matrix, reduce_matrix, scan_double_cosets, verify
from pgl2_whittaker.cycnum import CycScalar, psi
from pgl2_whittaker.exceptions import (
    DimensionError,
    EnumerationGuardError,
    InvertibilityError,
    LevelMismatchError,
    ModulusMismatchError,
    NotBorelError,
    NotPrimeError,
    Pgl2WhittakerError,
    PrecisionError,
    SeriesSyntaxError,
    UnknownClaimError,
    VerificationFailedError,
)
from pgl2_whittaker.fqlaurent import PrimeField, Series, parse_series, relative_precision, render_series
from pgl2_whittaker.group import AElem, BorelForm, GroupElem, Iwahori0Params, parse_matrix
from pgl2_whittaker.harness import CLAIM_MAP, SUITES, ClaimReport, emit_report, run_all, run_claim_suite
from pgl2_whittaker.model import SectionVector, TorusClass, TransformMatrix, kernel_matrix, phi_matrix
from pgl2_whittaker.options import LevelParams, ScanBounds, VerifyOptions
from pgl2_whittaker.orbits import OrbitRep, decompose_BA, reduce_to_representative

__all__ = [
    "CLAIM_MAP",
    "SUITES",
    "AElem",
    "BorelForm",
    "ClaimReport",
    "CycScalar",
    "DimensionError",
    "EnumerationGuardError",
    "GroupElem",
    "InvertibilityError",
    "Iwahori0Params",
    "LevelMismatchError",
    "LevelParams",
    "ModulusMismatchError",
    "NotBorelError",
    "NotPrimeError",
    "OrbitRep",
    "Pgl2WhittakerError",
    "PrecisionError",
    "PrimeField",
    "ScanBounds",
    "SectionVector",
    "Series",
    "SeriesSyntaxError",
    "TorusClass",
    "TransformMatrix",
    "UnknownClaimError",
    "VerificationFailedError",
    "VerifyOptions",
    "build_matrix",
    "decompose_BA",
    "dump_matrix",
    "emit_report",
    "kernel_matrix",
    "parse_matrix",
    "parse_series",
    "phi_matrix",
    "psi",
    "reduce_to_representative",
    "relative_precision",
    "render_series",
    "run_all",
    "run_claim_suite",
    "scan_double_cosets",
    "verify",
]

__version__ = "0.1.0"

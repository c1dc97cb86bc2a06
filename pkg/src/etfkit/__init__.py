"""Gabor-Steiner equiangular tight frames, signature matrices and roux lines."""

__version__ = "0.1.0"

from .cyclo import CycloMatrix, CycloScalar, root_of_unity  # noqa: E402
from .frames import Frame, gram, naimark_complement, onb, simplex, verify_etf, welch_bound  # noqa: E402
from .gabor import GroupShape, fiducial, gabor_steiner, gram_closed_form, rep_pi  # noqa: E402
from .signature import (  # noqa: E402
    SignatureMatrix,
    check_signature_axioms,
    closed_form_normalized,
    normalize_signature,
    signature_of,
    switching_witness,
)
from .spectra import hadamard_power, two_eigenvalue_test  # noqa: E402

__all__ = [
    "CycloMatrix",
    "CycloScalar",
    "Frame",
    "GroupShape",
    "SignatureMatrix",
    "check_signature_axioms",
    "closed_form_normalized",
    "fiducial",
    "gabor_steiner",
    "gram",
    "gram_closed_form",
    "hadamard_power",
    "naimark_complement",
    "normalize_signature",
    "onb",
    "rep_pi",
    "root_of_unity",
    "signature_of",
    "simplex",
    "switching_witness",
    "two_eigenvalue_test",
    "verify_etf",
    "welch_bound",
]

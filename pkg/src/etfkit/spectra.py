"""Hermitian spectra, Hadamard powers and the two-eigenvalue certificate.

Matrices are either complex numpy arrays (float backend) or
:class:`~etfkit.cyclo.CycloMatrix` instances (exact backend).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclo import CycloMatrix
from .errors import NonHermitian, NonUnimodular

DEFAULT_TOL = 1e-8

QUADRATIC_EXACT = "quadratic-identity-exact"
DENSE_FLOAT = "dense-eig-float"


@dataclass(frozen=True)
class SpectrumReport:
    distinct_count: int
    eigenvalues: list[tuple[float, int]]
    method: str
    tolerance_used: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "distinct_count": self.distinct_count,
            "eigenvalues": [{"value": v, "multiplicity": m} for v, m in self.eigenvalues],
            "method": self.method,
            "tolerance_used": self.tolerance_used,
        }


def backend_of(a) -> str:
    return "exact" if isinstance(a, CycloMatrix) else "float"


def to_float(a) -> np.ndarray:
    if isinstance(a, CycloMatrix):
        return a.to_complex()
    return np.asarray(a, dtype=complex)


def hadamard_power(a, n: int):
    """Entrywise n-th power, keeping the backend."""
    if isinstance(a, CycloMatrix):
        return a.hadamard_power(n)
    return np.asarray(a, dtype=complex) ** n


def check_hermitian(a, tol: float = 1e-10) -> bool:
    if isinstance(a, CycloMatrix):
        return a.shape[0] == a.shape[1] and a.H == a
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def offdiag_mask(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def check_unimodular_offdiag(a, tol: float = 1e-10) -> bool:
    if isinstance(a, CycloMatrix):
        n = a.shape[0]
        sq = a.hadamard(a.conj())
        ones = CycloMatrix.from_rational(sq.order, offdiag_mask(n).astype(np.int64))
        return sq.hadamard(ones) == ones
    a = np.asarray(a)
    off = np.abs(a[offdiag_mask(a.shape[0])])
    return bool(np.all(np.abs(off - 1.0) <= tol))


def check_zero_diagonal(a, tol: float = 1e-10) -> bool:
    if isinstance(a, CycloMatrix):
        return all(x == 0 for x in a.diagonal())
    return bool(np.all(np.abs(np.diag(np.asarray(a))) <= tol))


def cluster_eigenvalues(vals, tol: float = DEFAULT_TOL) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose neighbour gap is within tol * spectral radius.

    Returns (mean value, multiplicity) pairs in strictly decreasing order.
    """
    vals = np.sort(np.asarray(vals, dtype=float))[::-1]
    if vals.size == 0:
        return []
    radius = float(np.max(np.abs(vals)))
    clusters: list[list[float]] = [[vals[0]]]
    for v in vals[1:]:
        if clusters[-1][-1] - v <= tol * radius:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def dense_spectrum(a, tol: float = DEFAULT_TOL) -> SpectrumReport:
    vals = np.linalg.eigvalsh(to_float(a))
    clusters = cluster_eigenvalues(vals, tol)
    return SpectrumReport(len(clusters), clusters, DENSE_FLOAT, tol)


def _literal_diagonal(a) -> SpectrumReport:
    if isinstance(a, CycloMatrix):
        diag = [complex(x).real for x in a.diagonal()]
    else:
        diag = list(np.real(np.diag(np.asarray(a))))
    values = sorted(set(diag), reverse=True)
    eigs = [(float(v), diag.count(v)) for v in values]
    return SpectrumReport(len(eigs), eigs, DENSE_FLOAT, None, ["degenerate: no off-diagonal entries"])


def two_eigenvalue_test(s, tol: float | None = DEFAULT_TOL) -> SpectrumReport:
    """Count the distinct eigenvalues of a zero-diagonal, unimodular, self-adjoint matrix.

    On the exact backend the count is certified through the identity
    ``S @ S == alpha * S + (n - 1) * I`` with rational ``alpha``; if the
    identity fails the dense float path decides.  The float backend always
    uses a Hermitian eigensolver and clusters eigenvalues at relative
    tolerance ``tol``.
    """
    ftol = DEFAULT_TOL if tol is None else tol
    n = s.shape[0]
    if not check_hermitian(s, tol=ftol):
        raise NonHermitian("matrix is not self-adjoint")
    if n <= 1:
        return _literal_diagonal(s)
    if not check_unimodular_offdiag(s, tol=ftol):
        raise NonUnimodular("off-diagonal entries must have modulus one")

    if not isinstance(s, CycloMatrix):
        return dense_spectrum(s, ftol)

    sq = s @ s
    notes: list[str] = []
    if all(x == n - 1 for x in sq.diagonal()):
        alpha = sq[0, 1] * s[0, 1].conjugate()
        if alpha.is_rational():
            a = alpha.to_rational()
            rhs = s.scale(a) + CycloMatrix.identity(s.order, n).scale(n - 1)
            if sq == rhs:
                return _quadratic_report(Fraction(a), n)
        notes.append("quadratic identity fails; dense fallback")
    else:
        notes.append("diagonal of S^2 differs from n-1; dense fallback")
    rep = dense_spectrum(s, ftol)
    return SpectrumReport(rep.distinct_count, rep.eigenvalues, rep.method, rep.tolerance_used, notes)


def _quadratic_report(alpha: Fraction, n: int) -> SpectrumReport:
    disc = alpha * alpha + 4 * (n - 1)
    root = math.sqrt(disc)
    hi = (float(alpha) + root) / 2
    lo = (float(alpha) - root) / 2
    # trace zero: m_hi * hi + (n - m_hi) * lo = 0
    m_hi = round(-n * lo / (hi - lo))
    notes = [f"alpha={alpha}"]
    if m_hi <= 0 or m_hi >= n:
        # identity holds but only one eigenvalue actually occurs; cannot happen
        # for traceless S with n >= 2, kept as a guard
        notes.append("multiplicity out of range")
    return SpectrumReport(2, [(hi, m_hi), (lo, n - m_hi)], QUADRATIC_EXACT, None, notes)

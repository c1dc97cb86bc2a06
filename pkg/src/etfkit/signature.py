"""Signature (Seidel) matrices, switching, and the Gabor-Steiner closed forms.

Switching a frame multiplies vector j by a unimodular c_j.  Its signature
matrix then becomes ``conj(c_j) S[j, k] c_k``, i.e. ``D^* S D`` with
``D = diag(c)``; :func:`apply_switching` implements exactly this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import spectra
from .cyclo import CycloMatrix
from .errors import NotEquiangular, OrthogonalSet, ZeroFirstRowEntry
from .frames import Frame, gram
from .gabor import GroupShape, _as_shape, _pair_arrays

FROM_FRAME = "from-frame"
CLOSED_FORM = "closed-form"
HADAMARD_POWER = "hadamard-power"


@dataclass(frozen=True, eq=False)
class SignatureMatrix:
    entries: object  # np.ndarray or CycloMatrix
    normalized: bool = False
    provenance: str = FROM_FRAME
    shape: GroupShape | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def backend(self) -> str:
        return spectra.backend_of(self.entries)

    def to_complex(self) -> np.ndarray:
        return spectra.to_float(self.entries)

    def with_entries(self, entries, **changes) -> SignatureMatrix:
        kw = dict(normalized=self.normalized, provenance=self.provenance, shape=self.shape)
        kw.update(changes)
        return SignatureMatrix(entries, **kw)

    def first_row_is_normalized(self, tol: float = 1e-10) -> bool:
        e = self.entries
        n = self.n
        if isinstance(e, CycloMatrix):
            return all(e[0, j] == 1 and e[j, 0] == 1 for j in range(1, n))
        return bool(np.all(np.abs(e[0, 1:] - 1) <= tol) and np.all(np.abs(e[1:, 0] - 1) <= tol))

    def to_json_dict(self) -> dict:
        z = self.to_complex()
        out = {
            "n": self.n,
            "entries": [[[float(x.real), float(x.imag)] for x in row] for row in z],
            "normalized": self.normalized,
            "provenance": self.provenance,
        }
        if isinstance(self.entries, CycloMatrix):
            out["exact_entries"] = cyclo_entries_json(self.entries)
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> SignatureMatrix:
        arr = np.array(obj["entries"], dtype=float)
        n = int(obj["n"])
        if arr.shape != (n, n, 2):
            raise ValueError(f"'entries' has shape {arr.shape}, expected {(n, n, 2)}")
        return cls(arr[..., 0] + 1j * arr[..., 1], bool(obj["normalized"]), obj["provenance"])


def _json_rational(q):
    q = Fraction(int(q)) if isinstance(q, (int, np.integer)) else Fraction(q)
    return int(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cyclo_entries_json(a: CycloMatrix) -> list:
    rows, cols = a.shape
    return [
        [{"cyclo": {"order": a.order, "coeffs": [_json_rational(c) for c in a.coeffs[:, i, j]]}}
         for j in range(cols)]
        for i in range(rows)
    ]


def signature_of(frame: Frame, backend: str = "float", tol: float = 1e-9) -> SignatureMatrix:
    """S = (Gram - nu^2 I) / alpha for an equal-norm equiangular frame."""
    g = gram(frame)
    n = frame.n
    norms2 = np.real(np.diag(g))
    nu2 = float(np.mean(norms2))
    off = np.abs(g[~np.eye(n, dtype=bool)])
    if n < 2:
        raise NotEquiangular("need at least two vectors")
    if np.ptp(norms2) > tol * nu2 or np.ptp(off) > tol * nu2:
        raise NotEquiangular("frame is not equal-norm and equiangular")
    alpha = float(np.mean(off))
    if alpha <= tol * nu2:
        raise OrthogonalSet("all inner products vanish; the signature matrix is undefined")
    if backend == "exact":
        return SignatureMatrix(_exact_signature(frame), False, FROM_FRAME)
    s = (g - nu2 * np.eye(n)) / alpha
    return SignatureMatrix(s, False, FROM_FRAME)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def _exact_signature(frame: Frame) -> CycloMatrix:
    g = gram(frame, "exact")
    nu2 = g[0, 0]
    a2 = g[0, 1].norm_squared()
    if not (nu2.is_rational() and a2.is_rational()):
        raise ValueError("exact Gram entries are not of the expected form")
    alpha = _rational_sqrt(Fraction(a2.to_rational()))
    if alpha is None:
        raise ValueError("off-diagonal magnitude is irrational; use the float backend")
    s = g - CycloMatrix.identity(g.order, frame.n).scale(nu2.to_rational())
    return s if alpha == 1 else s.scale(1 / alpha)


def apply_switching(s: SignatureMatrix, c) -> SignatureMatrix:
    """Signature of the frame after vector j is multiplied by ``c[j]``.

    ``c`` is a complex vector (float backend) or an n x 1 CycloMatrix.
    """
    e = s.entries
    if isinstance(e, CycloMatrix):
        if not isinstance(c, CycloMatrix):
            raise TypeError("exact signatures need an exact switching vector")
        outer = c.conj() @ c.T  # outer[j, k] = conj(c_j) c_k
        return s.with_entries(e.hadamard(outer), normalized=False)
    c = np.asarray(c, dtype=complex).reshape(-1)
    return s.with_entries(np.conj(c)[:, None] * e * c[None, :], normalized=False)


def normalize_signature(s: SignatureMatrix):
    """Return (S_bar, D) with S_bar = D S D^*, D_00 = 1, D_jj = S[0, j].

    The result has ones in its first row and column off the diagonal.
    ``D`` is returned as a vector (float) or an n x 1 CycloMatrix (exact).
    """
    e = s.entries
    n = s.n
    if isinstance(e, CycloMatrix):
        first = e.take([0], list(range(n)))  # 1 x n
        if np.any(first.is_zero()[0, 1:]):
            raise ZeroFirstRowEntry("cannot normalize: zero entry in the first row")
        dvec = first.T.coeffs.copy()
        dvec[:, 0, 0] = 0
        dvec[0, 0, 0] = 1
        dmat = CycloMatrix(e.order, dvec)
        # D S D^* = apply_switching with c = conj(D)
        out = apply_switching(s, dmat.conj())
        return out.with_entries(out.entries, normalized=True), dmat
    dvec = np.array(e[0], dtype=complex)
    if np.any(np.abs(dvec[1:]) == 0):
        raise ZeroFirstRowEntry("cannot normalize: zero entry in the first row")
    dvec[0] = 1.0
    out = dvec[:, None] * e * np.conj(dvec)[None, :]
    return s.with_entries(out, normalized=True), dvec


def closed_form_normalized(shape, root_power: int = 1) -> SignatureMatrix:
    """Normalized signature of G(m) in closed form, exact backend.

    Row (kt, kapt), column (k, kap): ones off the diagonal in the row and
    column of (0, 0), zero diagonal, and elsewhere
    -prod_l zeta_{m_l}^{root_power (kap_l kt_l - kapt_l k_l) inv2_l}.
    ``root_power`` selects the primitive root zeta^root_power in place of zeta.
    """
    shape = _as_shape(shape)
    if any(math.gcd(root_power, x) != 1 for x in shape.m):
        raise ValueError(f"zeta^{root_power} is not primitive for shape {shape.m}")
    k, kap = _pair_arrays(shape)
    inv2 = np.array(shape.inv2)
    mvec = np.array(shape.m)
    cross = kap[None, :, :] * k[:, None, :] - kap[:, None, :] * k[None, :, :]
    e = ((cross * inv2 * root_power) % mvec * shape.weights()).sum(axis=2) % shape.order
    n = shape.n
    coef = -np.ones((n, n), dtype=np.int64)
    coef[0, :] = 1
    coef[:, 0] = 1
    e[0, :] = 0
    e[:, 0] = 0
    np.fill_diagonal(coef, 0)
    return SignatureMatrix(CycloMatrix.from_exponents(shape.order, e, coef), True, CLOSED_FORM, shape)


def switching_witness(shape) -> CycloMatrix:
    """The phases c_(k,kap) = prod_l zeta_{m_l}^{-kap_l (k_l - 1) inv2_l}, with an
    extra factor -1 on (0, 0), as an n x 1 exact column in orbit order."""
    shape = _as_shape(shape)
    k, kap = _pair_arrays(shape)
    inv2 = np.array(shape.inv2)
    mvec = np.array(shape.m)
    e = ((-kap * (k - 1) * inv2) % mvec * shape.weights()).sum(axis=1) % shape.order
    coef = np.ones(shape.n, dtype=np.int64)
    coef[0] = -1
    return CycloMatrix.from_exponents(shape.order, e[:, None], coef[:, None])


@dataclass
class SignatureAxiomsReport:
    self_adjoint: bool
    zero_diagonal: bool
    unimodular: bool
    two_eigenvalues: bool
    top_multiplicity_ok: bool | None
    spectrum: spectra.SpectrumReport | None
    d: int | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.self_adjoint and self.zero_diagonal and self.unimodular
                and self.two_eigenvalues and self.top_multiplicity_ok is not False)

    def to_dict(self) -> dict:
        return {
            "self_adjoint": self.self_adjoint,
            "zero_diagonal": self.zero_diagonal,
            "unimodular": self.unimodular,
            "two_eigenvalues": self.two_eigenvalues,
            "top_multiplicity_ok": self.top_multiplicity_ok,
            "d": self.d,
            "spectrum": self.spectrum.to_dict() if self.spectrum else None,
            "pass": self.passed,
            "failures": self.failures,
        }


def check_signature_axioms(s, d: int | None = None, tol: float = 1e-8) -> SignatureAxiomsReport:
    """Check self-adjointness, zero diagonal, unimodularity, two eigenvalues
    and (given d) the multiplicity of the larger eigenvalue.  Never raises."""
    e = s.entries if isinstance(s, SignatureMatrix) else s
    sa = spectra.check_hermitian(e, tol)
    zd = spectra.check_zero_diagonal(e, tol)
    um = spectra.check_unimodular_offdiag(e, tol)
    failures = [name for name, ok in (("self_adjoint", sa), ("zero_diagonal", zd), ("unimodular", um)) if not ok]
    spec = None
    two = False
    top_ok = None
    if sa and zd and um:
        spec = spectra.two_eigenvalue_test(e, tol)
        two = spec.distinct_count == 2
        if not two:
            failures.append("two_eigenvalues")
        if d is not None:
            top_ok = two and spec.eigenvalues[0][1] == d
            if not top_ok:
                failures.append("top_multiplicity")
    elif sa:
        spec = spectra.dense_spectrum(e, tol)
        failures.append("two_eigenvalues")
    else:
        failures.append("two_eigenvalues")
    if d is not None and top_ok is None:
        top_ok = False
    return SignatureAxiomsReport(sa, zd, um, two, top_ok, spec, d, failures)


def reconstruct_etf(s: SignatureMatrix, tol: float = 1e-8) -> Frame:
    """Build a unit-norm ETF whose signature is ``s`` (two-eigenvalue input).

    The Gram matrix is proportional to S - lambda_min I, the projector onto
    the top eigenspace up to scale; its rank factorization gives the
    vectors in dimension d = multiplicity of the larger eigenvalue.
    """
    z = s.to_complex()
    vals, vecs = np.linalg.eigh(z)
    clusters = spectra.cluster_eigenvalues(vals, tol)
    if len(clusters) != 2:
        raise ValueError(f"expected two eigenvalues, found {len(clusters)}")
    (hi, d), (lo, _) = clusters
    # eigh sorts ascending; the top eigenspace is the last d columns
    top_vals = vals[-d:] - lo
    top_vecs = vecs[:, -d:]
    phi = (top_vecs * np.sqrt(top_vals)).conj().T  # d x n, Gram = S - lo I
    return Frame(phi / np.linalg.norm(phi, axis=0), norm_convention="unit")


__all__ = [
    "SignatureMatrix",
    "SignatureAxiomsReport",
    "apply_switching",
    "check_signature_axioms",
    "closed_form_normalized",
    "normalize_signature",
    "reconstruct_etf",
    "signature_of",
    "switching_witness",
]

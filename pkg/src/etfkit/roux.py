"""Roux-lines detection via Hadamard powers of a normalized signature matrix.

A normalized signature matrix describes roux lines exactly when its
entries are roots of unity and every Hadamard power has two eigenvalues.
Hadamard powers are periodic in N with period r, the least common order of
the entries, so checking N = 1..r settles every power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spectra
from .cyclo import CycloMatrix
from .errors import NotNormalized, SizeBudget
from .gabor import GroupShape
from .signature import HADAMARD_POWER, SignatureMatrix, closed_form_normalized

DEFAULT_R_MAX = 360
DEFAULT_TOL = 1e-8
HARNESS_MAX_N = 1000


@dataclass
class PowerRow:
    N: int
    distinct_count: int
    passed: bool
    eigenvalues: list[tuple[float, int]] = field(default_factory=list)
    pattern_ok: bool | None = None

    def to_dict(self) -> dict:
        out = {"N": self.N, "distinct_eigenvalue_count": self.distinct_count, "pass": self.passed,
               "eigenvalues": [{"value": v, "multiplicity": m} for v, m in self.eigenvalues]}
        if self.pattern_ok is not None:
            out["pattern_ok"] = self.pattern_ok
        return out


@dataclass
class RouxReport:
    is_roux: bool
    root_order: int | None
    per_power: list[PowerRow] = field(default_factory=list)
    failure_reason: str | None = None
    backend: str = "float"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        patterns = [row.pattern_ok for row in self.per_power if row.pattern_ok is not None]
        return self.is_roux and all(patterns)

    def to_dict(self) -> dict:
        return {
            "is_roux": self.is_roux,
            "root_order": self.root_order,
            "per_power": [row.to_dict() for row in self.per_power],
            "failure_reason": self.failure_reason,
            "backend": self.backend,
            "pass": self.passed,
            "details": self.details,
        }


def default_r_max(s: SignatureMatrix) -> int:
    if s.shape is not None:
        return 2 * s.shape.order
    return DEFAULT_R_MAX


def _offdiag_values(e) -> np.ndarray:
    n = e.shape[0]
    return e[~np.eye(n, dtype=bool)]


def entry_root_order(s: SignatureMatrix, r_max: int, tol: float = DEFAULT_TOL) -> int | None:
    """Least r <= r_max with z**r == 1 for every off-diagonal entry z, else None."""
    e = s.entries
    n = s.n
    if n < 2:
        return 1
    if isinstance(e, CycloMatrix):
        off = ~np.eye(n, dtype=bool)
        flat = e.coeffs[:, off].T
        uniq = np.unique(flat.astype(str) if flat.dtype == object else flat, axis=0, return_index=True)[1]
        r = 1
        for idx in uniq:
            i, j = np.argwhere(off)[idx]
            q = e[int(i), int(j)].multiplicative_order(r_max)
            if q is None:
                return None
            r = math.lcm(r, q)
            if r > r_max:
                return None
        return r
    z = _offdiag_values(np.asarray(e))
    z = np.unique(np.round(z, 12))
    r = 1
    for v in z:
        cur = 1.0 + 0j
        q = None
        for t in range(1, r_max + 1):
            cur *= v
            if abs(cur - 1) <= tol * t:  # roundoff grows linearly in t
                q = t
                break
        if q is None:
            return None
        r = math.lcm(r, q)
        if r > r_max:
            return None
    return r


def exactify(s: SignatureMatrix, r: int, tol: float = 1e-6) -> SignatureMatrix:
    """Snap a float signature whose off-diagonal entries are r-th roots of
    unity onto the exact backend over Q(zeta_r)."""
    if isinstance(s.entries, CycloMatrix):
        return s
    z = np.asarray(s.entries)
    n = s.n
    k = np.rint(np.angle(z) * r / (2 * np.pi)).astype(np.int64) % r
    snapped = np.exp(2j * np.pi * k / r)
    off = ~np.eye(n, dtype=bool)
    if np.any(np.abs(snapped - z)[off] > tol):
        raise ValueError(f"entries are not {r}-th roots of unity within {tol}")
    coef = off.astype(np.int64)
    return s.with_entries(CycloMatrix.from_exponents(r, k, coef))


def roux_detect(s: SignatureMatrix, r_max: int | None = None, tol: float = DEFAULT_TOL,
                backend: str | None = None) -> RouxReport:
    """Run both roux conditions on a normalized signature matrix.

    ``backend="exact"`` with a float input snaps the entries to roots of
    unity of the detected order before the power tests.
    """
    if not (s.normalized and s.first_row_is_normalized(max(tol, 1e-10))):
        raise NotNormalized("roux detection needs a normalized signature matrix")
    if r_max is None:
        r_max = default_r_max(s)
    r = entry_root_order(s, r_max, tol)
    backend = backend or s.backend
    if r is None:
        return RouxReport(False, None, [], f"RootOrderNotFound: entries are not roots of unity of order <= {r_max}",
                          backend, {"r_max": r_max})
    if backend == "exact":
        s = exactify(s, r)
    elif isinstance(s.entries, CycloMatrix):
        s = s.with_entries(s.to_complex())
    rows = []
    for n_pow in range(1, r + 1):
        p = spectra.hadamard_power(s.entries, n_pow)
        rep = spectra.two_eigenvalue_test(p, tol)
        rows.append(PowerRow(n_pow, rep.distinct_count, rep.distinct_count == 2, rep.eigenvalues))
    ok = all(row.passed for row in rows)
    reason = None if ok else "some Hadamard power has more than two eigenvalues"
    return RouxReport(ok, r, rows, reason, backend, {"r_max": r_max})


def _inner_mask(n: int) -> np.ndarray:
    """Off-diagonal entries outside the first row and column."""
    m = ~np.eye(n, dtype=bool)
    m[0, :] = False
    m[:, 0] = False
    return m


def expected_power(shape: GroupShape, n_pow: int, backend: str):
    """What the N-th Hadamard power of the closed form should be, as a matrix.

    For p not dividing N: the closed form for the primitive root zeta^N, with
    the entries off the first row/column multiplied by (-1)^(N+1), since
    (-z)^N = (-1)^N z^N.  For p | N: (-1)^N off the first row/column.
    """
    p = shape.m[0]
    n = shape.n
    inner = _inner_mask(n)
    first = ~np.eye(n, dtype=bool) & ~inner
    if n_pow % p:
        base = closed_form_normalized(shape, root_power=n_pow).entries
        sign = np.where(inner, (-1) ** (n_pow + 1), 1).astype(np.int64)
        exp = base.hadamard(CycloMatrix.from_rational(base.order, sign))
    else:
        vals = np.where(inner, (-1) ** n_pow, 0) + first.astype(np.int64)
        exp = CycloMatrix.from_rational(shape.order, vals.astype(np.int64))
    return exp if backend == "exact" else exp.to_complex()


def roux_theorem_harness(p: int, s: int, backend: str = "exact", tol: float = DEFAULT_TOL,
                         max_n: int = HARNESS_MAX_N) -> RouxReport:
    """Roux detection on G(p, ..., p) with s + 1 factors, plus the pattern of
    each Hadamard power, for N = 1..2p."""
    if p < 3 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError(f"p must be an odd prime, got {p}")
    shape = GroupShape((p,) * (s + 1))
    if shape.n > max_n:
        raise SizeBudget(f"n = {shape.n} exceeds the size budget {max_n}")
    sbar = closed_form_normalized(shape)
    if backend != "exact":
        sbar = sbar.with_entries(sbar.to_complex())
    rep = roux_detect(sbar, r_max=2 * p, tol=tol, backend=backend)
    for row in rep.per_power:
        got = spectra.hadamard_power(sbar.entries, row.N)
        want = expected_power(shape, row.N, backend)
        if isinstance(got, CycloMatrix):
            row.pattern_ok = got == want
        else:
            row.pattern_ok = bool(np.max(np.abs(got - want)) <= tol)
    rep.details.update({"p": p, "s": s, "n": shape.n, "d": shape.d})
    if rep.is_roux and not all(row.pattern_ok for row in rep.per_power):
        rep.failure_reason = "Hadamard power pattern mismatch"
    return rep


def power_signature(s: SignatureMatrix, n_pow: int) -> SignatureMatrix:
    return s.with_entries(spectra.hadamard_power(s.entries, n_pow), provenance=HADAMARD_POWER)

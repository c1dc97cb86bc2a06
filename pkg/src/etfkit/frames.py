"""Frames, ETF verification, reference ETFs and the Naimark complement.

The inner product is linear in the first argument and conjugate-linear in
the second, ``<x, y> = sum(x * conj(y))``.  With that convention the Gram
matrix ``G = Phi^* Phi`` has entries ``G[j, k] = <phi_k, phi_j>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cyclo import CycloMatrix
from .errors import FullDimension, NotTight

UNIT = "unit"
RAW = "raw"


@dataclass(frozen=True, eq=False)
class Frame:
    """``n`` vectors in ``C^d`` stored as the columns of a d x n matrix.

    ``exact`` optionally carries the same vectors over a cyclotomic field;
    it is only set by constructors that know the vectors exactly.
    """

    vectors: np.ndarray
    labels: tuple[str, ...] = ()
    norm_convention: str = UNIT
    exact: CycloMatrix | None = None
    tol: float = 1e-12

    def __post_init__(self) -> None:
        v = np.array(self.vectors, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"vectors must be a non-empty d x n matrix, got shape {v.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)
        labels = tuple(self.labels) or tuple(str(j) for j in range(v.shape[1]))
        if len(labels) != v.shape[1]:
            raise ValueError(f"{len(labels)} labels for {v.shape[1]} vectors")
        object.__setattr__(self, "labels", labels)
        if self.norm_convention not in (UNIT, RAW):
            raise ValueError(f"unknown norm convention {self.norm_convention!r}")
        norms = self.norms()
        if np.any(norms == 0):
            raise ValueError("frame contains a zero vector")
        if self.norm_convention == UNIT and np.any(np.abs(norms - 1) > self.tol):
            raise ValueError("norm_convention='unit' but some vectors are not unit length")
        if self.exact is not None and self.exact.shape != v.shape:
            raise ValueError("exact vectors do not match the float vectors")

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=0)

    def unit_normalized(self) -> Frame:
        if self.norm_convention == UNIT:
            return self
        return Frame(self.vectors / self.norms(), self.labels, UNIT)

    def rephased(self, phases) -> Frame:
        """Multiply vector j by the unimodular scalar ``phases[j]``."""
        phases = np.asarray(phases, dtype=complex)
        return Frame(self.vectors * phases[None, :], self.labels, self.norm_convention)

    # serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "vectors": [[[float(z.real), float(z.imag)] for z in col] for col in self.vectors.T],
            "labels": list(self.labels),
            "norm_convention": self.norm_convention,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> Frame:
        d, n = int(obj["d"]), int(obj["n"])
        cols = np.array(obj["vectors"], dtype=float)
        if cols.shape != (n, d, 2):
            raise ValueError(f"'vectors' has shape {cols.shape}, expected {(n, d, 2)}")
        vecs = (cols[..., 0] + 1j * cols[..., 1]).T
        return cls(vecs, tuple(obj["labels"]), obj.get("norm_convention", RAW))

    def dump(self, path) -> None:
        Path(path).write_text(dumps(self.to_json_dict()) + "\n")

    @classmethod
    def load(cls, path) -> Frame:
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def dumps(obj) -> str:
    # Python's float repr is the shortest string that round-trips, so the
    # output reproduces every double bit-for-bit.
    return json.dumps(obj, indent=1, allow_nan=False)


def gram(frame: Frame, backend: str = "float"):
    """Gram matrix ``Phi^* Phi``; ``G[j, k] = <phi_k, phi_j>``."""
    if backend == "exact":
        if frame.exact is None:
            raise ValueError("frame carries no exact vectors")
        return frame.exact.H @ frame.exact
    v = frame.vectors
    return v.conj().T @ v


def welch_bound(n: int, d: int) -> float:
    if n <= 1 or n <= d:
        return 0.0
    return math.sqrt((n - d) / (d * (n - 1)))


@dataclass(frozen=True)
class EtfVerdict:
    is_tight: bool
    is_equal_norm: bool
    is_equiangular: bool
    coherence: float
    welch_bound: float
    saturates_welch: bool
    gerzon_ok: bool
    tolerance: float
    n: int = 0
    d: int = 0
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_etf(self) -> bool:
        return self.is_tight and self.is_equal_norm and self.is_equiangular

    def to_dict(self) -> dict:
        return {
            "is_tight": self.is_tight,
            "is_equal_norm": self.is_equal_norm,
            "is_equiangular": self.is_equiangular,
            "coherence": self.coherence,
            "welch_bound": self.welch_bound,
            "saturates_welch": self.saturates_welch,
            "gerzon_ok": self.gerzon_ok,
            "tolerance": self.tolerance,
            "is_etf": self.is_etf,
            "flags": list(self.flags),
        }


def tightness_defect(frame: Frame) -> float:
    """Relative Frobenius distance of the unit-normalized frame operator from (n/d) I."""
    u = frame.unit_normalized().vectors
    a = frame.n / frame.d
    return float(np.linalg.norm(u @ u.conj().T - a * np.eye(frame.d)) / a)


def verify_etf(frame: Frame, tol: float = 1e-9) -> EtfVerdict:
    n, d = frame.n, frame.d
    norms = frame.norms()
    equal_norm = bool(np.max(norms) - np.min(norms) <= tol * np.max(norms))
    unit = frame.unit_normalized()
    tight = tightness_defect(frame) <= tol
    flags: list[str] = []
    if n < 2:
        flags.append("DegenerateInput: fewer than two vectors, equiangularity is vacuous")
        coherence, spread = 0.0, 0.0
    else:
        g = np.abs(gram(unit))
        off = g[~np.eye(n, dtype=bool)]
        coherence = float(off.max())
        spread = float(off.max() - off.min())
    wb = welch_bound(n, d)
    saturates = abs(coherence - wb) <= tol
    return EtfVerdict(
        is_tight=tight,
        is_equal_norm=equal_norm,
        is_equiangular=spread <= tol,
        coherence=coherence,
        welch_bound=wb,
        saturates_welch=saturates,
        gerzon_ok=not (saturates and n > d * d),
        tolerance=tol,
        n=n,
        d=d,
        flags=tuple(flags),
    )


def onb(d: int) -> Frame:
    if d < 1:
        raise ValueError("d must be positive")
    return Frame(np.eye(d, dtype=complex), tuple(f"e{j}" for j in range(d)), UNIT,
                 exact=CycloMatrix.identity(1, d))


def _helmert(d: int) -> np.ndarray:
    """Rows form an orthonormal basis of the complement of the all-ones vector in R^(d+1)."""
    h = np.zeros((d, d + 1))
    for k in range(1, d + 1):
        h[k - 1, :k] = 1.0
        h[k - 1, k] = -k
        h[k - 1] /= math.sqrt(k * (k + 1))
    return h


def simplex(d: int) -> Frame:
    """d + 1 unit vectors in C^d with all pairwise inner products -1/d."""
    if d < 1:
        raise ValueError("d must be positive")
    centered = np.eye(d + 1) - 1.0 / (d + 1)
    coords = _helmert(d) @ centered
    coords /= np.linalg.norm(coords, axis=0)
    return Frame(coords.astype(complex), tuple(f"s{j}" for j in range(d + 1)), UNIT)


def naimark_complement(frame: Frame, tol: float = 1e-9) -> Frame:
    """Complementary tight frame of n vectors in C^(n-d).

    The rows of sqrt(d/n) * Phi (unit-normalized) are completed to an
    orthonormal basis of C^n by Gram-Schmidt over the standard basis in
    index order; the new rows, rescaled to unit columns, are returned.
    """
    n, d = frame.n, frame.d
    if n == d:
        raise FullDimension("n == d: the complement is zero-dimensional")
    if tightness_defect(frame) > tol:
        raise NotTight("Naimark complement requires a tight frame")
    u = frame.unit_normalized().vectors
    rows = math.sqrt(d / n) * u  # orthonormal rows
    basis = list(rows)
    extra: list[np.ndarray] = []
    for j in range(n):
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        for _ in range(2):  # re-orthogonalize once for stability
            for b in basis + extra:
                v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            extra.append(v / nv)
        if len(extra) == n - d:
            break
    comp = np.array(extra)  # (n-d) x n, orthonormal rows orthogonal to ``rows``
    comp = comp * math.sqrt(n / (n - d))
    comp = comp / np.linalg.norm(comp, axis=0)
    return Frame(comp, frame.labels, UNIT)


def random_unit_frame(d: int, n: int, rng: np.random.Generator) -> Frame:
    v = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
    return Frame(v / np.linalg.norm(v, axis=0), norm_convention=UNIT)

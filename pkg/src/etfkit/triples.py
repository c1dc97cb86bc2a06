"""Triple products TP(j, k, l) = <phi_j, phi_k> <phi_k, phi_l> <phi_l, phi_j> and
the identities and tests built on them.

All checks work on the unit-normalized frame and return a :class:`CheckReport`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import NotEtf, NotTight, ZeroTripleProduct
from .frames import Frame, gram, tightness_defect, verify_etf

EXHAUSTIVE_LIMIT = 12
DEFAULT_SAMPLES = 10_000


@dataclass
class CheckReport:
    name: str
    passed: bool
    max_violation: float | None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "max_violation": self.max_violation,
            "details": self.details,
        }


@dataclass(frozen=True, eq=False)
class TripleProductTensor:
    """Dense n x n x n array of triple products.

    Entries with repeated indices are kept (they are |<phi_j, phi_k>|^2 or 1)
    but every test below restricts to distinct triples.
    """

    values: np.ndarray
    magnitude_class: float | None = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def distinct_mask(self) -> np.ndarray:
        return distinct_mask(self.n)

    def distinct_values(self) -> np.ndarray:
        return self.values[self.distinct_mask()]

    def __getitem__(self, idx):
        return self.values[idx]


def distinct_mask(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None, None] != i[None, :, None]) & (i[:, None, None] != i[None, None, :]) & (
        i[None, :, None] != i[None, None, :]
    )


def inner_products(frame: Frame) -> np.ndarray:
    """ip[j, k] = <phi_j, phi_k> for the unit-normalized frame."""
    return gram(frame.unit_normalized()).T


def triple_products(frame: Frame, tol: float = 1e-9) -> TripleProductTensor:
    ip = inner_products(frame)
    tp = np.einsum("jk,kl,lj->jkl", ip, ip, ip)
    mags = np.abs(tp[distinct_mask(frame.n)])
    mag = None
    if mags.size and np.ptp(mags) <= tol:
        mag = float(mags.mean())
    return TripleProductTensor(tp, mag)


def sum_identity_check(frame: Frame, tol: float = 1e-10) -> CheckReport:
    """For a unit-norm tight frame: sum_l TP(j, k, l) = (n/d) |<phi_j, phi_k>|^2, j != k."""
    if tightness_defect(frame) > 1e-9:
        raise NotTight("the sum identity needs a tight frame")
    n, d = frame.n, frame.d
    ip = inner_products(frame)
    tp = np.einsum("jk,kl,lj->jkl", ip, ip, ip)
    lhs = tp.sum(axis=2)
    rhs = (n / d) * np.abs(ip) ** 2
    off = ~np.eye(n, dtype=bool)
    viol = float(np.max(np.abs(lhs - rhs)[off], initial=0.0))
    return CheckReport("sum_identity", viol <= tol, viol, {"pairs": int(off.sum()), "tol": tol})


def _four_tuples(n: int, samples: int, seed: int) -> tuple[np.ndarray, dict]:
    if n < 4:
        return np.zeros((0, 4), dtype=np.int64), {"mode": "exhaustive"}
    if n <= EXHAUSTIVE_LIMIT:
        return np.array(list(itertools.permutations(range(n), 4))), {"mode": "exhaustive"}
    rng = np.random.default_rng(seed)
    out = np.empty((0, 4), dtype=np.int64)
    while len(out) < samples:
        cand = rng.integers(0, n, size=(2 * samples, 4))
        ok = np.ones(len(cand), dtype=bool)
        for a, b in itertools.combinations(range(4), 2):
            ok &= cand[:, a] != cand[:, b]
        out = np.concatenate([out, cand[ok]])
    return out[:samples], {"mode": "sampled", "seed": seed, "samples": samples}


def cocycle_identity_check(frame: Frame, samples: int = DEFAULT_SAMPLES, tol: float = 1e-10,
                           seed: int = 0) -> CheckReport:
    """Check TPn(j,k,l) = TPn(m,j,k) TPn(m,k,l) TPn(m,l,j) with TPn = TP / |TP|
    over distinct (j, k, l, m); exhaustive for n <= 12, seeded samples beyond."""
    tp = triple_products(frame).values
    tuples, details = _four_tuples(frame.n, samples, seed)
    details["tuples"] = int(len(tuples))
    details["tol"] = tol
    if len(tuples) == 0:
        return CheckReport("cocycle_identity", True, 0.0, details)
    j, k, l, m = tuples.T
    parts = [tp[j, k, l], tp[m, j, k], tp[m, k, l], tp[m, l, j]]
    zero = np.zeros(len(tuples), dtype=bool)
    for p in parts:
        zero |= np.abs(p) <= tol
    if zero.any():
        details["error"] = "ZeroTripleProduct"
        details["zero_tuples"] = int(zero.sum())
        return CheckReport("cocycle_identity", False, None, details)
    ph = [p / np.abs(p) for p in parts]
    viol = float(np.max(np.abs(ph[0] - ph[1] * ph[2] * ph[3])))
    return CheckReport("cocycle_identity", viol <= tol, viol, details)


def simplex_test(frame: Frame, tol: float = 1e-9) -> bool:
    """True iff every distinct-triple product is real and negative."""
    v = triple_products(frame).distinct_values()
    if v.size == 0:
        return False
    return bool(np.all(np.abs(v.imag) <= tol) and np.all(v.real <= -tol))


def _require_etf(frame: Frame, tol: float) -> None:
    if not verify_etf(frame, tol).is_etf:
        raise NotEtf("input is not an equiangular tight frame")


def triple_covariance_obstruction(frame: Frame, tol: float = 1e-9) -> CheckReport:
    """Are all distinct-triple products equal?  Required for triple covariance,
    and possible only for d = 1, orthonormal bases, or n = d + 1."""
    _require_etf(frame, tol)
    v = triple_products(frame).distinct_values()
    spread = float(np.max(np.abs(v - v[0]))) if v.size else 0.0
    all_equal = spread <= tol
    verdict = verify_etf(frame, tol)
    n, d = frame.n, frame.d
    predicted = n <= d + 1 or verdict.coherence <= tol or d == 1
    return CheckReport(
        "triple_covariance_obstruction",
        all_equal == predicted,
        spread,
        {"all_equal": all_equal, "predicted_equal": predicted, "n": n, "d": d,
         "tol": tol},
    )


def _min_root_order(z: np.ndarray, limit: int, tol: float) -> np.ndarray:
    orders = np.zeros(z.shape, dtype=np.int64)
    cur = np.ones_like(z)
    for q in range(1, limit + 1):
        cur = cur * z
        hit = (orders == 0) & (np.abs(cur - 1) <= tol)
        orders[hit] = q
    return orders


def two_transitive_phase_test(frame: Frame, tol: float = 1e-9) -> CheckReport:
    """Every normalized distinct-triple product must be a 2n-th root of unity."""
    _require_etf(frame, tol)
    n = frame.n
    v = triple_products(frame).distinct_values()
    if v.size == 0:
        return CheckReport("two_transitive_phase", True, 0.0, {"n": n, "triples": 0})
    if np.any(np.abs(v) <= tol):
        raise ZeroTripleProduct("some triple product vanishes; phases are undefined")
    ph = v / np.abs(v)
    dev = np.abs(ph ** (2 * n) - 1)
    viol = float(dev.max())
    uniq, first, inverse = np.unique(np.round(ph, 9), return_index=True, return_inverse=True)
    orders = _min_root_order(ph[first], 2 * n, max(tol, 1e-9))[inverse.ravel()]
    # order 0 marks a phase that is no root of unity of degree <= 2n
    qs, cs = np.unique(orders, return_counts=True)
    counts = dict(zip(qs.tolist(), cs.tolist()))
    return CheckReport(
        "two_transitive_phase",
        viol <= tol,
        viol,
        {"n": n, "root_degree": 2 * n, "distinct_phases": int(len(uniq)),
         "phase_orders": {str(k): c for k, c in sorted(counts.items())}},
    )

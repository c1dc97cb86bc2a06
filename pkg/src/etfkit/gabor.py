"""Translation/modulation operators and Gabor-Steiner ETFs.

For a shape ``m = (m_0, ..., m_s)`` of odd integers >= 3 the group is
``Z_{m_0} + ... + Z_{m_s}``, indexed lexicographically with ``m_0`` the
most significant digit.  All roots of unity are expressed through a
single root ``zeta_L`` with ``L = lcm(m)``; ``zeta_{m_l}^a = zeta_L^(a L / m_l)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cyclo import CycloMatrix, root_of_unity_complex
from .errors import IndexOutOfRange, InvalidShape
from .frames import RAW, Frame


@dataclass(frozen=True)
class GroupShape:
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        m = tuple(int(x) for x in self.m)
        if not m:
            raise InvalidShape("shape must have at least one factor")
        for x in m:
            if x < 3 or x % 2 == 0:
                raise InvalidShape(f"every factor must be an odd integer >= 3, got {x}")
        object.__setattr__(self, "m", m)

    @classmethod
    def parse(cls, text: str) -> GroupShape:
        """Parse ``"3,3"`` style strings."""
        try:
            parts = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError as exc:
            raise InvalidShape(f"cannot parse shape {text!r}") from exc
        return cls(parts)

    @property
    def size(self) -> int:
        return math.prod(self.m)

    @property
    def order(self) -> int:
        """Order L of the common root of unity, lcm(m)."""
        return math.lcm(*self.m)

    @property
    def n(self) -> int:
        return self.size**2

    @property
    def d(self) -> int:
        return self.size * (self.size - 1) // 2

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(*(range(x) for x in self.m)))

    @cached_property
    def element_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(self.size, len(self.m))

    @cached_property
    def pairs(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Orbit column order: lexicographic on (k_0..k_s, kappa_0..kappa_s)."""
        return tuple(itertools.product(self.elements, self.elements))

    @property
    def inv2(self) -> tuple[int, ...]:
        return tuple((x + 1) // 2 for x in self.m)

    def flat_index(self, k) -> int:
        self.check(k)
        idx = 0
        for x, kk in zip(self.m, k):
            idx = idx * x + kk
        return idx

    def check(self, k) -> None:
        if len(k) != len(self.m) or any(not 0 <= kk < x for kk, x in zip(k, self.m)):
            raise IndexOutOfRange(f"index {tuple(k)} is not in Z_{self.m}")

    def weights(self) -> np.ndarray:
        """L / m_l, converting exponents of zeta_{m_l} into exponents of zeta_L."""
        return np.array([self.order // x for x in self.m], dtype=np.int64)

    def __str__(self) -> str:
        return ",".join(map(str, self.m))


def _as_shape(shape) -> GroupShape:
    if isinstance(shape, GroupShape):
        return shape
    if isinstance(shape, str):
        return GroupShape.parse(shape)
    if isinstance(shape, int):
        return GroupShape((shape,))
    return GroupShape(tuple(shape))


def _kron_all(mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for a in mats:
        out = np.kron(out, a)
    return out


def cyclic_shift(m: int, k: int = 1) -> np.ndarray:
    """T^k with (T x)_j = x_{j-1 mod m}."""
    return np.roll(np.eye(m, dtype=complex), k % m, axis=0)


def translation(shape, k) -> np.ndarray:
    shape = _as_shape(shape)
    shape.check(k)
    return _kron_all(cyclic_shift(x, kk) for x, kk in zip(shape.m, k))


def modulation(shape, kappa) -> np.ndarray:
    shape = _as_shape(shape)
    shape.check(kappa)
    return _kron_all(np.diag(root_of_unity_complex(x, np.arange(x) * kk)) for x, kk in zip(shape.m, kappa))


def _tm_monomial(shape: GroupShape, k, kappa) -> tuple[np.ndarray, np.ndarray]:
    """M^kappa T^k as a monomial matrix: column j has its entry at row perm[j]
    with value zeta_L^exps[j]."""
    el = shape.element_array
    shifted = (el + np.asarray(k)) % np.array(shape.m)
    perm = np.array([shape.flat_index(tuple(r)) for r in shifted])
    exps = (shifted * np.asarray(kappa) * shape.weights()).sum(axis=1) % shape.order
    return perm, exps


def tm_exact(shape, k, kappa) -> CycloMatrix:
    """Exact M^kappa T^k over Q(zeta_L)."""
    shape = _as_shape(shape)
    shape.check(k)
    shape.check(kappa)
    perm, exps = _tm_monomial(shape, k, kappa)
    size = shape.size
    e = np.zeros((size, size), dtype=np.int64)
    c = np.zeros((size, size), dtype=np.int64)
    e[perm, np.arange(size)] = exps
    c[perm, np.arange(size)] = 1
    return CycloMatrix.from_exponents(shape.order, e, c)


def rep_pi(shape, k, kappa, backend: str = "float"):
    """The projective representation I_{(|m|-1)/2} (x) (M^kappa T^k)."""
    shape = _as_shape(shape)
    blocks = (shape.size - 1) // 2
    if backend == "exact":
        block = tm_exact(shape, k, kappa)
        deg = block.deg
        size = shape.size
        c = np.zeros((deg, blocks * size, blocks * size), dtype=block.coeffs.dtype)
        for b in range(blocks):
            c[:, b * size:(b + 1) * size, b * size:(b + 1) * size] = block.coeffs
        return CycloMatrix(shape.order, c)
    return np.kron(np.eye(blocks), modulation(shape, kappa) @ translation(shape, k))


def fiducial_index_set(shape) -> list[tuple[int, ...]]:
    """The first (|m|-1)/2 group elements in lexicographic order."""
    shape = _as_shape(shape)
    return list(shape.elements[: (shape.size - 1) // 2])


def reflect(shape, i) -> tuple[int, ...]:
    """m - i - 1 componentwise."""
    shape = _as_shape(shape)
    return tuple((x - ii - 1) % x for x, ii in zip(shape.m, i))


def fiducial(shape) -> np.ndarray:
    """The stacked generating vector; block i is e_i - e_{m-i-1}."""
    shape = _as_shape(shape)
    size = shape.size
    blocks = []
    for i in fiducial_index_set(shape):
        phi = np.zeros(size)
        phi[shape.flat_index(i)] = 1.0
        phi[shape.flat_index(reflect(shape, i))] = -1.0
        blocks.append(phi)
    return np.concatenate(blocks)


def pair_label(k, kappa) -> str:
    return f"({','.join(map(str, k))};{','.join(map(str, kappa))})"


def _orbit_exponents(shape: GroupShape) -> tuple[np.ndarray, np.ndarray]:
    """Exponent and coefficient arrays (d x n) of the orbit over zeta_L.

    Column (k, kappa), block i: +zeta^{<kappa, i+k>} at i+k and
    -zeta^{<kappa, i'+k>} at i'+k with i' = m - i - 1; the pairing
    <a, b> = sum_l a_l b_l L/m_l.
    """
    size = shape.size
    mvec = np.array(shape.m)
    w = shape.weights()
    index = fiducial_index_set(shape)
    d, n = len(index) * size, shape.n
    exps = np.zeros((d, n), dtype=np.int64)
    coef = np.zeros((d, n), dtype=np.int64)
    col = 0
    for k, kappa in shape.pairs:
        k_arr = np.asarray(k)
        kap = np.asarray(kappa)
        for b, i in enumerate(index):
            for pos, sign in ((np.asarray(i), 1), (np.asarray(reflect(shape, i)), -1)):
                tgt = (pos + k_arr) % mvec
                row = b * size + shape.flat_index(tuple(tgt))
                exps[row, col] = int((tgt * kap * w).sum()) % shape.order
                coef[row, col] = sign
        col += 1
    return exps, coef


def gabor_steiner(shape, exact: bool = True) -> Frame:
    """The Gabor-Steiner ETF: the orbit of the fiducial under rep_pi.

    Columns are ordered lexicographically by (k, kappa) and keep their raw
    norm sqrt(|m| - 1).  With ``exact=True`` the frame also carries its
    vectors over Q(zeta_L).
    """
    shape = _as_shape(shape)
    exps, coef = _orbit_exponents(shape)
    vecs = coef * root_of_unity_complex(shape.order, exps)
    labels = tuple(pair_label(k, kappa) for k, kappa in shape.pairs)
    ex = CycloMatrix.from_exponents(shape.order, exps, coef) if exact else None
    return Frame(vecs, labels, RAW, exact=ex)


def _pair_arrays(shape: GroupShape) -> tuple[np.ndarray, np.ndarray]:
    el = shape.element_array
    size = shape.size
    k = np.repeat(el, size, axis=0)
    kappa = np.tile(el, (size, 1))
    return k, kappa


def gram_closed_form(shape) -> CycloMatrix:
    """Exact Gram matrix of the raw Gabor-Steiner ETF.

    Row (kt, kapt), column (k, kap), off the diagonal:
    -prod_l zeta_{m_l}^{(kap_l - kapt_l)(kt_l + k_l - 1) inv2_l}; diagonal |m| - 1.
    """
    shape = _as_shape(shape)
    k, kap = _pair_arrays(shape)
    inv2 = np.array(shape.inv2)
    mvec = np.array(shape.m)
    w = shape.weights()
    # rows index (kt, kapt), columns (k, kap)
    dk = kap[None, :, :] - kap[:, None, :]
    sk = k[:, None, :] + k[None, :, :] - 1
    e = ((dk * sk * inv2) % mvec * w).sum(axis=2) % shape.order
    n = shape.n
    coef = -np.ones((n, n), dtype=np.int64)
    np.fill_diagonal(coef, 0)
    g = CycloMatrix.from_exponents(shape.order, e, coef)
    return g + CycloMatrix.identity(shape.order, n).scale(shape.size - 1)


def orbit_shift_permutation(shape, a, alpha) -> tuple[int, ...]:
    """Index permutation (k, kap) -> (k + a, kap + alpha) on the orbit columns."""
    shape = _as_shape(shape)
    size = shape.size
    mvec = np.array(shape.m)
    el = shape.element_array
    ka = (el + np.asarray(a)) % mvec
    kp = (el + np.asarray(alpha)) % mvec
    kidx = np.array([shape.flat_index(tuple(r)) for r in ka])
    pidx = np.array([shape.flat_index(tuple(r)) for r in kp])
    return tuple(int(kidx[j // size] * size + pidx[j % size]) for j in range(shape.n))

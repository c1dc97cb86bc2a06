"""Exact arithmetic in the cyclotomic field Q(zeta_r).

Elements are stored in the power basis 1, zeta, ..., zeta^(deg-1) where
deg = phi(r), after reduction modulo the r-th cyclotomic polynomial.  Both
scalars (:class:`CycloScalar`) and dense matrices (:class:`CycloMatrix`)
keep their coefficients in an array whose *leading* axis runs over the
power basis, so ring operations on whole matrices vectorize with numpy.

Integer coefficients are held in ``int64`` whenever an operation can be
shown not to overflow; otherwise the arrays fall back to ``object`` dtype
with Python ints or :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

_INT64_SAFE = 2**62


def _divisors(r: int) -> list[int]:
    return [q for q in range(1, r + 1) if r % q == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(r: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_r, lowest degree first.

    Uses x^r - 1 = prod_{q | r} Phi_q and divides out the proper divisors.
    """
    if r < 1:
        raise ValueError(f"order must be positive, got {r}")
    num = [-1] + [0] * (r - 1) + [1]
    for q in _divisors(r)[:-1]:
        num = _poly_divexact(num, list(cyclotomic_polynomial(q)))
    return tuple(num)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # den is monic, remainder must vanish
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + dd]
        quot[i] = c
        if c:
            for j, dc in enumerate(den):
                num[i + j] -= c * dc
    if any(num[:dd]):
        raise ArithmeticError("polynomial division left a remainder")
    return quot


def degree(r: int) -> int:
    return len(cyclotomic_polynomial(r)) - 1


@lru_cache(maxsize=None)
def _reduction_table(r: int) -> np.ndarray:
    """Row e holds the canonical coefficients of zeta_r^e, 0 <= e < r."""
    phi = cyclotomic_polynomial(r)
    deg = len(phi) - 1
    table = np.zeros((r, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for e in range(r):
        table[e] = cur
        # multiply by x, then eliminate x^deg using the monic relation
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:deg])]
    table.flags.writeable = False
    return table


def _table(r: int, dtype) -> np.ndarray:
    t = _reduction_table(r)
    return t.astype(object) if dtype == object else t


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(x) for x in a.flat)
    return int(np.abs(a).max())


def _all_integral(a: np.ndarray) -> bool:
    if a.dtype != object:
        return True
    return all(isinstance(x, (int, np.integer)) or Fraction(x).denominator == 1 for x in a.flat)


def _tidy(a: np.ndarray) -> np.ndarray:
    """Canonical storage: int64 if integral and small, else object."""
    if a.dtype != object:
        return a
    if _all_integral(a) and _absmax(a) < 2**31:
        return np.array([int(x) for x in a.flat], dtype=np.int64).reshape(a.shape)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        x = Fraction(x)
        out[idx] = x.numerator if x.denominator == 1 else x
    return out


def _reduce(r: int, raw: np.ndarray) -> np.ndarray:
    """Map coefficients over exponents 0..E-1 to the canonical basis."""
    e = raw.shape[0]
    tab = _table(r, raw.dtype)[np.arange(e) % r]  # (E, deg)
    out = np.tensordot(tab.T, raw, axes=([1], [0]))
    return out


def _safe(bound: int) -> bool:
    return bound < _INT64_SAFE


def _mul(r: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise (broadcasting) product of two coefficient arrays."""
    deg = a.shape[0]
    tmax = _absmax(_reduction_table(r))
    use_int = (a.dtype != object and b.dtype != object
               and _safe(_absmax(a) * _absmax(b) * deg * max(tmax, 1) * deg))
    dtype = np.int64 if use_int else object
    a = a.astype(dtype)
    b = b.astype(dtype)
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    raw = np.zeros((2 * deg - 1,) + shape, dtype=dtype)
    if dtype == object:
        raw[...] = 0
    for i in range(deg):
        for j in range(deg):
            raw[i + j] = raw[i + j] + a[i] * b[j]
    return _tidy(_reduce(r, raw))


def _matmul(r: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    deg = a.shape[0]
    inner = a.shape[2]
    tmax = _absmax(_reduction_table(r))
    use_int = (a.dtype != object and b.dtype != object
               and _safe(_absmax(a) * _absmax(b) * inner * deg * max(tmax, 1) * deg))
    dtype = np.int64 if use_int else object
    a = a.astype(dtype)
    b = b.astype(dtype)
    raw = np.zeros((2 * deg - 1, a.shape[1], b.shape[2]), dtype=dtype)
    if dtype == object:
        raw[...] = 0
    for i in range(deg):
        for j in range(deg):
            raw[i + j] = raw[i + j] + a[i] @ b[j]
    return _tidy(_reduce(r, raw))


def _conj(r: int, a: np.ndarray) -> np.ndarray:
    deg = a.shape[0]
    tab = _table(r, a.dtype)[(-np.arange(deg)) % r]  # (deg, deg)
    return _tidy(np.tensordot(tab.T, a, axes=([1], [0])))


def _lift(r: int, big: int, a: np.ndarray) -> np.ndarray:
    """Re-express coefficients over zeta_r in the basis of zeta_big (r | big)."""
    if big % r:
        raise ValueError(f"cannot embed order {r} into order {big}")
    if big == r:
        return a
    step = big // r
    deg = a.shape[0]
    raw = np.zeros((big,) + a.shape[1:], dtype=a.dtype)
    if a.dtype == object:
        raw[...] = 0
    raw[np.arange(deg) * step] = a
    return _tidy(_reduce(big, raw))


def _coerce_rational(x) -> int | Fraction:
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Rational):
        f = Fraction(x)
        return f.numerator if f.denominator == 1 else f
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def _powers_complex(r: int, deg: int) -> np.ndarray:
    k = np.arange(deg)
    return np.cos(2 * np.pi * k / r) + 1j * np.sin(2 * np.pi * k / r)


class CycloScalar:
    """An element of Q(zeta_r), canonically reduced."""

    __slots__ = ("order", "_c")

    def __init__(self, order: int, coeffs) -> None:
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        deg = degree(order)
        raw = np.array([_coerce_rational(c) for c in coeffs] or [0], dtype=object)
        if len(raw) > deg:
            raw = _reduce(order, raw)
        elif len(raw) < deg:
            raw = np.concatenate([raw, np.zeros(deg - len(raw), dtype=object)])
        self.order = order
        self._c = _tidy(raw.astype(object))

    @classmethod
    def _from_array(cls, order: int, arr: np.ndarray) -> CycloScalar:
        obj = object.__new__(cls)
        obj.order = order
        obj._c = _tidy(np.asarray(arr))
        return obj

    @classmethod
    def rational(cls, order: int, value) -> CycloScalar:
        return cls(order, [value])

    @property
    def coeffs(self) -> tuple:
        return tuple(_coerce_rational(c) for c in self._c)

    def _other(self, other) -> tuple[int, np.ndarray, np.ndarray]:
        if isinstance(other, CycloScalar):
            r = math.lcm(self.order, other.order)
            return r, _lift(self.order, r, self._c), _lift(other.order, r, other._c)
        try:
            q = _coerce_rational(other)
        except TypeError:
            return NotImplemented
        return self.order, self._c, CycloScalar(self.order, [q])._c

    def __add__(self, other):
        got = self._other(other)
        if got is NotImplemented:
            return got
        r, a, b = got
        return CycloScalar._from_array(r, a.astype(object) + b.astype(object))

    __radd__ = __add__

    def __neg__(self) -> CycloScalar:
        return CycloScalar._from_array(self.order, -self._c.astype(object))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        got = self._other(other)
        if got is NotImplemented:
            return got
        r, a, b = got
        return CycloScalar._from_array(r, _mul(r, a, b))

    __rmul__ = __mul__

    def conjugate(self) -> CycloScalar:
        return CycloScalar._from_array(self.order, _conj(self.order, self._c))

    def norm_squared(self) -> CycloScalar:
        return self * self.conjugate()

    def is_unimodular(self) -> bool:
        return self.norm_squared() == 1

    def __pow__(self, n: int) -> CycloScalar:
        if n < 0:
            if not self.is_unimodular():
                raise ZeroDivisionError("negative powers need a unimodular base")
            return self.conjugate() ** (-n)
        result = CycloScalar(self.order, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, CycloScalar):
            if not other.is_unimodular():
                if other.is_rational():
                    return self * Fraction(1) / other.to_rational()
                raise ZeroDivisionError("exact division only by rationals or unimodular elements")
            return self * other.conjugate()
        q = _coerce_rational(other)
        return CycloScalar._from_array(self.order, self._c.astype(object) * Fraction(1, 1) / q)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self._c[1:])

    def to_rational(self) -> int | Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return _coerce_rational(self._c[0])

    def lift(self, order: int) -> CycloScalar:
        return CycloScalar._from_array(order, _lift(self.order, order, self._c))

    def multiplicative_order(self, limit: int) -> int | None:
        """Least q <= limit with self**q == 1, or None."""
        cur = self
        for q in range(1, limit + 1):
            if cur == 1:
                return q
            cur = cur * self
        return None

    def __complex__(self) -> complex:
        w = _powers_complex(self.order, len(self._c))
        return complex(sum(float(c) * z for c, z in zip(self._c, w)))

    def __eq__(self, other) -> bool:
        got = self._other(other)
        if got is NotImplemented:
            return NotImplemented
        _, a, b = got
        return bool(np.all(a.astype(object) == b.astype(object)))

    def __hash__(self) -> int:
        # equal values of different orders must collide; hash the order-free value
        return hash((complex(self).real.__round__(9), complex(self).imag.__round__(9)))

    def __repr__(self) -> str:
        return f"CycloScalar({self.order}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if j == 0 else f"{c}*z{self.order}^{j}")
        return " + ".join(terms) or "0"


def root_of_unity(r: int, j: int) -> CycloScalar:
    """zeta_r^j with zeta_r = exp(2 pi i / r)."""
    if r < 1:
        raise ValueError(f"order must be positive, got {r}")
    return CycloScalar._from_array(r, _reduction_table(r)[j % r].copy())


def root_of_unity_complex(r: int, j) -> np.ndarray | complex:
    """Floating evaluation of zeta_r^j straight from cos/sin."""
    t = 2 * np.pi * (np.asarray(j) % r) / r
    out = np.cos(t) + 1j * np.sin(t)
    return complex(out) if np.ndim(out) == 0 else out


class CycloMatrix:
    """Dense matrix over Q(zeta_r); ``coeffs`` has shape (deg, rows, cols)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: np.ndarray) -> None:
        coeffs = np.asarray(coeffs)
        if coeffs.ndim != 3 or coeffs.shape[0] != degree(order):
            raise ValueError(
                f"coefficient array must have shape (deg={degree(order)}, rows, cols), "
                f"got {coeffs.shape}"
            )
        self.order = order
        self.coeffs = _tidy(coeffs)

    # construction -----------------------------------------------------

    @classmethod
    def zeros(cls, order: int, shape: tuple[int, int]) -> CycloMatrix:
        return cls(order, np.zeros((degree(order),) + tuple(shape), dtype=np.int64))

    @classmethod
    def identity(cls, order: int, n: int) -> CycloMatrix:
        c = np.zeros((degree(order), n, n), dtype=np.int64)
        c[0] = np.eye(n, dtype=np.int64)
        return cls(order, c)

    @classmethod
    def from_rational(cls, order: int, values) -> CycloMatrix:
        values = np.asarray(values)
        c = np.zeros((degree(order),) + values.shape, dtype=values.dtype if values.dtype != bool else np.int64)
        if values.dtype == object:
            c = c.astype(object)
            c[...] = 0
        c[0] = values
        return cls(order, c)

    @classmethod
    def from_exponents(cls, order: int, exponents, coeff=1) -> CycloMatrix:
        """Matrix with entries ``coeff * zeta_order**exponents`` (entrywise).

        ``coeff`` broadcasts against ``exponents``; integer coefficients
        of zero give zero entries regardless of the exponent.
        """
        exponents = np.asarray(exponents, dtype=np.int64) % order
        coeff = np.broadcast_to(np.asarray(coeff), exponents.shape)
        tab = _reduction_table(order)  # (r, deg)
        if coeff.dtype == object:
            c = np.moveaxis(tab.astype(object)[exponents], -1, 0) * coeff
        else:
            c = np.moveaxis(tab[exponents], -1, 0) * coeff.astype(np.int64)
        return cls(order, c)

    @classmethod
    def from_scalars(cls, rows) -> CycloMatrix:
        rows = [list(r) for r in rows]
        order = 1
        for row in rows:
            for x in row:
                if isinstance(x, CycloScalar):
                    order = math.lcm(order, x.order)
        deg = degree(order)
        c = np.zeros((deg, len(rows), len(rows[0]) if rows else 0), dtype=object)
        c[...] = 0
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if not isinstance(x, CycloScalar):
                    x = CycloScalar(order, [x])
                c[:, i, j] = x.lift(order)._c
        return cls(order, c)

    # shape and access -------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    @property
    def deg(self) -> int:
        return self.coeffs.shape[0]

    def __getitem__(self, key) -> CycloScalar | CycloMatrix:
        i, j = key
        sub = self.coeffs[:, i, j]
        if sub.ndim == 1:
            return CycloScalar._from_array(self.order, sub.copy())
        if sub.ndim == 2:
            # keep 2-D shape for a row/column slice
            sub = sub[:, None, :] if isinstance(i, (int, np.integer)) else sub[:, :, None]
        return CycloMatrix(self.order, sub.copy())

    def take(self, rows, cols) -> CycloMatrix:
        return CycloMatrix(self.order, self.coeffs[:, rows][:, :, cols])

    def diagonal(self) -> list[CycloScalar]:
        n = min(self.shape)
        return [self[i, i] for i in range(n)]

    @property
    def T(self) -> CycloMatrix:
        return CycloMatrix(self.order, np.swapaxes(self.coeffs, 1, 2))

    def conj(self) -> CycloMatrix:
        return CycloMatrix(self.order, _conj(self.order, self.coeffs))

    @property
    def H(self) -> CycloMatrix:
        return self.conj().T

    # arithmetic -------------------------------------------------------

    def _align(self, other: CycloMatrix) -> tuple[int, np.ndarray, np.ndarray]:
        r = math.lcm(self.order, other.order)
        return r, _lift(self.order, r, self.coeffs), _lift(other.order, r, other.coeffs)

    def __add__(self, other: CycloMatrix) -> CycloMatrix:
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        r, a, b = self._align(other)
        if a.dtype != object and b.dtype != object and _safe(_absmax(a) + _absmax(b)):
            return CycloMatrix(r, a + b)
        return CycloMatrix(r, a.astype(object) + b.astype(object))

    def __neg__(self) -> CycloMatrix:
        return CycloMatrix(self.order, -self.coeffs)

    def __sub__(self, other: CycloMatrix) -> CycloMatrix:
        return self + (-other)

    def scale(self, s) -> CycloMatrix:
        """Multiply every entry by a scalar (rational or CycloScalar)."""
        if isinstance(s, CycloScalar):
            r = math.lcm(self.order, s.order)
            a = _lift(self.order, r, self.coeffs)
            b = _lift(s.order, r, s._c)[:, None, None]
            return CycloMatrix(r, _mul(r, a, b))
        q = _coerce_rational(s)
        if isinstance(q, int) and self.coeffs.dtype != object and _safe(_absmax(self.coeffs) * abs(q) + 1):
            return CycloMatrix(self.order, self.coeffs * q)
        return CycloMatrix(self.order, self.coeffs.astype(object) * q)

    def __mul__(self, s) -> CycloMatrix:
        if isinstance(s, CycloMatrix):
            raise TypeError("use @ for matrix products and hadamard() for entrywise ones")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: CycloMatrix) -> CycloMatrix:
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        r, a, b = self._align(other)
        return CycloMatrix(r, _matmul(r, a, b))

    def hadamard(self, other: CycloMatrix) -> CycloMatrix:
        r, a, b = self._align(other)
        return CycloMatrix(r, _mul(r, a, b))

    def hadamard_power(self, n: int) -> CycloMatrix:
        if n < 0:
            raise ValueError("Hadamard powers are only defined for N >= 0 here")
        result = CycloMatrix.from_rational(self.order, np.ones(self.shape, dtype=np.int64))
        base = self
        while n:
            if n & 1:
                result = result.hadamard(base)
            n >>= 1
            if n:
                base = base.hadamard(base)
        return result

    def lift(self, order: int) -> CycloMatrix:
        return CycloMatrix(order, _lift(self.order, order, self.coeffs))

    # predicates and conversion ----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        _, a, b = self._align(other)
        if a.dtype == object or b.dtype == object:
            return bool(np.all(a.astype(object) == b.astype(object)))
        return bool(np.array_equal(a, b))

    __hash__ = None

    def is_rational(self) -> np.ndarray:
        """Boolean array: which entries lie in Q."""
        if self.deg == 1:
            return np.ones(self.shape, dtype=bool)
        return np.all(self.coeffs[1:] == 0, axis=0)

    def is_zero(self) -> np.ndarray:
        return np.all(self.coeffs == 0, axis=0)

    def to_complex(self) -> np.ndarray:
        w = _powers_complex(self.order, self.deg)
        return np.tensordot(w, self.coeffs.astype(float), axes=([0], [0]))

    def __repr__(self) -> str:
        return f"CycloMatrix(order={self.order}, shape={self.shape})"

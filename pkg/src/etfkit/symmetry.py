"""Projective symmetry groups of ETFs as triple-product-preserving permutations.

The group is enumerated by backtracking over the images of the frame
indices.  Each index carries a fingerprint (the sorted multiset of the
triple products it takes part in); an index may only be mapped to one with
the same fingerprint, and every partial assignment must preserve all triple
products among the indices assigned so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cyclo import _mul
from .errors import NotEtf, SearchBudgetExceeded, TooLarge
from .frames import Frame, gram, verify_etf

Permutation = tuple[int, ...]

DEFAULT_MAX_N = 100
DEFAULT_MAX_NODES = 10**7
DEFAULT_TOL = 1e-8


def compose(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """(a o b)(i) = a[b[i]]."""
    return tuple(a[i] for i in b)


def inverse(a: Sequence[int]) -> Permutation:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def check_permutation(a: Sequence[int]) -> None:
    if sorted(a) != list(range(len(a))):
        raise ValueError(f"{tuple(a)} is not a permutation")


@dataclass(frozen=True)
class PermGroup:
    degree: int
    elements: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        for g in self.elements:
            check_permutation(g)
        object.__setattr__(self, "elements", tuple(sorted(set(map(tuple, self.elements)))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def is_closed(self) -> bool:
        """Contains the identity, inverses and all products."""
        elems = self._set
        if tuple(range(self.degree)) not in elems:
            return False
        if any(inverse(g) not in elems for g in self.elements):
            return False
        arr = np.array(self.elements, dtype=np.int64)
        # membership via an injective row encoding: row-major bytes
        keys = np.sort(arr.view(np.dtype((np.void, arr.itemsize * self.degree))).ravel())
        for g in arr:
            prods = np.ascontiguousarray(g[arr]).view(keys.dtype).ravel()  # g o h for every h
            pos = np.searchsorted(keys, prods)
            pos[pos == len(keys)] = 0
            if not np.all(keys[pos] == prods):
                return False
        return True

    def to_json_dict(self) -> dict:
        return {"degree": self.degree, "order": self.order, "elements": [list(g) for g in self.elements]}


def k_transitive(group: PermGroup | Iterable[Sequence[int]], n: int, k: int) -> bool:
    """Does the group act transitively on ordered k-tuples of distinct points?"""
    if k == 0:
        return True
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    elements = group.elements if isinstance(group, PermGroup) else [tuple(g) for g in group]
    orbit = {tuple(g[:k]) for g in elements}
    return len(orbit) == math.perm(n, k)


def _exact_tp_coeffs(frame: Frame) -> np.ndarray:
    ip = gram(frame, "exact").T  # ip[j, k] = <phi_j, phi_k>
    c, r = ip.coeffs, ip.order
    return _mul(r, _mul(r, c[:, :, :, None], c[:, None, :, :]), np.swapaxes(c, 1, 2)[:, :, None, :])


def _exact_tp_keys(*frames: Frame) -> list[np.ndarray]:
    """Integer key tensors, equal keys meaning equal triple products, with one
    id space shared by all given frames."""
    tps = [_exact_tp_coeffs(f) for f in frames]
    both = np.concatenate([t.reshape(t.shape[0], -1).T for t in tps])
    if both.dtype == object:
        both = both.astype(str)
    _, ids = np.unique(both, axis=0, return_inverse=True)
    ids = ids.ravel()
    size = ids.size // len(frames)
    return [ids[i * size:(i + 1) * size].reshape(tps[0].shape[1:]) for i in range(len(frames))]


def _float_tp(frame: Frame) -> np.ndarray:
    ip = gram(frame.unit_normalized()).T
    return np.einsum("jk,kl,lj->jkl", ip, ip, ip)


def _fingerprints(tp: np.ndarray, exact: bool) -> list:
    n = tp.shape[0]
    out = []
    for j in range(n):
        block = np.delete(np.delete(tp[j], j, axis=0), j, axis=1)
        vals = block[~np.eye(n - 1, dtype=bool)] if n > 1 else block.ravel()
        if exact:
            out.append(tuple(sorted(vals.tolist())))
        else:
            re = np.round(vals.real, 6) + 0.0
            im = np.round(vals.imag, 6) + 0.0
            out.append(tuple(sorted(zip(re.tolist(), im.tolist()))))
    return out


def _search(src: np.ndarray, dst: np.ndarray, exact: bool, tol: float,
            max_nodes: int) -> tuple[list[Permutation], int]:
    n = src.shape[0]
    fp_src = _fingerprints(src, exact)
    fp_dst = _fingerprints(dst, exact)
    cands = {j: [x for x in range(n) if fp_dst[x] == fp_src[j]] for j in range(n)}
    if any(not c for c in cands.values()):
        return [], 0
    order = sorted(range(n), key=lambda j: (len(cands[j]), j))

    cand_arr = {j: np.array(c, dtype=np.int64) for j, c in cands.items()}
    found: list[Permutation] = []
    image = [-1] * n
    used = np.zeros(n, dtype=bool)
    assigned_src: list[int] = []
    assigned_dst: list[int] = []
    nodes = 0

    def viable(s: int) -> np.ndarray:
        xs = cand_arr[s][~used[cand_arr[s]]]
        if not assigned_src or xs.size == 0:
            return xs
        a = np.array(assigned_src)
        b = np.array(assigned_dst)
        # every ordered triple (s, t, u) with t, u already placed, t == u included
        want = src[s][np.ix_(a, a)]
        got = dst[xs][:, b][:, :, b]
        if exact:
            ok = np.all(got == want, axis=(1, 2))
        else:
            ok = np.all(np.abs(got - want) <= tol, axis=(1, 2))
        return xs[ok]

    def extend(depth: int) -> None:
        nonlocal nodes
        if depth == n:
            found.append(tuple(image))
            return
        s = order[depth]
        xs = viable(s)
        nodes += int(xs.size)
        if nodes > max_nodes:
            raise SearchBudgetExceeded(f"search exceeded {max_nodes} nodes")
        for x in xs.tolist():
            image[s] = x
            used[x] = True
            assigned_src.append(s)
            assigned_dst.append(x)
            extend(depth + 1)
            assigned_src.pop()
            assigned_dst.pop()
            used[x] = False
            image[s] = -1

    extend(0)
    return found, nodes


def tp_automorphisms(frame: Frame, max_n: int = DEFAULT_MAX_N, max_nodes: int = DEFAULT_MAX_NODES,
                     tol: float = DEFAULT_TOL, backend: str = "float",
                     antiunitary: bool = False) -> PermGroup:
    """All permutations sigma with TP(sigma j, sigma k, sigma l) = TP(j, k, l).

    With ``antiunitary=True`` permutations mapping every triple product to
    its conjugate are added as well.  The exact backend needs a frame that
    carries exact vectors and compares triple products as field elements.
    """
    n = frame.n
    if n > max_n:
        raise TooLarge(f"n={n} exceeds the limit {max_n}")
    if not verify_etf(frame).is_etf:
        raise NotEtf("symmetry search requires an ETF")
    exact = backend == "exact"
    if exact:
        if frame.exact is None:
            raise ValueError("exact backend needs a frame with exact vectors")
        (tp,) = _exact_tp_keys(frame)
    else:
        tp = _float_tp(frame)
    found, nodes = _search(tp, tp, exact, tol, max_nodes)
    if antiunitary:
        if exact:
            conj_frame = Frame(frame.vectors.conj(), frame.labels, frame.norm_convention,
                               exact=frame.exact.conj())
            ctp = _exact_tp_keys(frame, conj_frame)
            more, _ = _search(ctp[0], ctp[1], True, tol, max_nodes - nodes)
        else:
            more, _ = _search(tp, tp.conj(), False, tol, max_nodes - nodes)
        found += more
    group = PermGroup(n, tuple(found))
    if not group.is_closed():
        raise RuntimeError("enumerated permutations are not closed under composition")
    return group


def is_k_covariant(frame: Frame, k: int, **limits) -> bool:
    return k_transitive(tp_automorphisms(frame, **limits), frame.n, k)


def preserves_triple_products(frame: Frame, perm: Sequence[int], tol: float = DEFAULT_TOL) -> bool:
    tp = _float_tp(frame)
    p = np.asarray(perm)
    return bool(np.all(np.abs(tp[np.ix_(p, p, p)] - tp) <= tol))


__all__ = [
    "PermGroup",
    "Permutation",
    "compose",
    "inverse",
    "is_k_covariant",
    "k_transitive",
    "preserves_triple_products",
    "tp_automorphisms",
]

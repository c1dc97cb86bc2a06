"""Assemble machine-readable analysis reports for a frame."""

from __future__ import annotations

import hashlib
import math
import time
from typing import Iterable

import numpy as np

from . import __version__
from .errors import EtfError
from .frames import Frame, dumps, verify_etf
from .roux import entry_root_order, exactify, roux_detect
from .signature import check_signature_axioms, normalize_signature, signature_of
from .symmetry import k_transitive, tp_automorphisms
from .triples import (
    cocycle_identity_check,
    simplex_test,
    sum_identity_check,
    triple_covariance_obstruction,
    two_transitive_phase_test,
)

ALL_CHECKS = ("etf", "signature", "triples", "covariance", "roux")


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def frame_digest(frame: Frame) -> str:
    """Digest of the canonical JSON text of a frame, identical for a frame in
    memory and the same frame read back from disk."""
    return digest((dumps(frame.to_json_dict()) + "\n").encode())


def _error(exc: Exception) -> dict:
    return {"pass": False, "error": type(exc).__name__, "message": str(exc)}


def normalized_signature(frame: Frame, backend: str, tol: float, r_max: int | None = None):
    """Normalized signature of ``frame``; on the exact backend the entries are
    taken from the frame's exact vectors, or snapped to roots of unity."""
    if backend == "exact" and frame.exact is not None:
        try:
            sbar, _ = normalize_signature(signature_of(frame, "exact", tol))
            return sbar
        except ValueError:
            pass
    sbar, _ = normalize_signature(signature_of(frame, "float", tol))
    if backend == "exact":
        r = entry_root_order(sbar, r_max or 360, 1e-8)
        if r is not None:
            sbar = exactify(sbar, r)
    return sbar


def check_etf(frame: Frame, tol: float) -> dict:
    v = verify_etf(frame, tol)
    out = v.to_dict()
    out["pass"] = v.is_etf and v.saturates_welch and v.gerzon_ok
    return out


def check_signature(frame: Frame, backend: str, tol: float) -> dict:
    try:
        sbar = normalized_signature(frame, backend, tol)
    except EtfError as exc:
        return _error(exc)
    rep = check_signature_axioms(sbar, frame.d, max(tol, 1e-8))
    out = rep.to_dict()
    out["backend"] = sbar.backend
    return out


def check_triples(frame: Frame, tol: float, seed: int) -> dict:
    out: dict = {}
    try:
        si = sum_identity_check(frame, max(tol, 1e-10))
        out["sum_identity"] = si.to_dict()
    except EtfError as exc:
        out["sum_identity"] = _error(exc)
    out["cocycle_identity"] = cocycle_identity_check(frame, tol=max(tol, 1e-10), seed=seed).to_dict()
    out["simplex"] = simplex_test(frame, tol)
    for name, fn in (("triple_covariance_obstruction", triple_covariance_obstruction),
                     ("two_transitive_phase", two_transitive_phase_test)):
        try:
            out[name] = fn(frame, tol).to_dict()
        except EtfError as exc:
            out[name] = _error(exc)
    # the 2n-th root test is a necessary condition for double transitivity,
    # so it is informative and does not gate the verdict
    gating = [out["sum_identity"], out["triple_covariance_obstruction"]]
    if "error" not in out["cocycle_identity"].get("details", {}):
        gating.append(out["cocycle_identity"])
    out["pass"] = all(c.get("pass", False) for c in gating)
    return out


def check_covariance(frame: Frame, backend: str, max_k: int, max_nodes: int,
                     antiunitary: bool = False) -> dict:
    try:
        b = backend if frame.exact is not None else "float"
        group = tp_automorphisms(frame, max_nodes=max_nodes, backend=b, antiunitary=antiunitary)
    except EtfError as exc:
        return _error(exc)
    n, d = frame.n, frame.d
    ks = {str(k): k_transitive(group, n, k) for k in range(1, min(max_k, n) + 1)}
    verdict = verify_etf(frame)
    trivial = d == 1 or n <= d + 1 or verdict.coherence <= 1e-9
    triply = ks.get("3", False)
    return {
        "group_order": group.order,
        "k_transitive": ks,
        "theorem_consistent": (not triply) or trivial,
        "antiunitary": antiunitary,
        "pass": (not triply) or trivial,
    }


def check_roux(frame: Frame, backend: str, tol: float, r_max: int | None) -> dict:
    try:
        sbar = normalized_signature(frame, backend, 1e-9, r_max)
        rep = roux_detect(sbar, r_max=r_max, tol=max(tol, 1e-8), backend=backend)
    except (EtfError, ValueError) as exc:
        return _error(exc)
    out = rep.to_dict()
    out["pass"] = rep.is_roux
    return out


def analyze(frame: Frame, checks: Iterable[str] = ALL_CHECKS, *, backend: str = "float",
            tol: float = 1e-9, seed: int = 0, max_k: int = 3, max_nodes: int = 10**7,
            r_max: int | None = None, timings: bool = False) -> dict:
    checks = list(checks)
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    verdict = verify_etf(frame, tol)
    report: dict = {
        "tool_version": __version__,
        "input_digest": frame_digest(frame),
        "frame": {"n": frame.n, "d": frame.d, "coherence": verdict.coherence,
                  "welch_bound": verdict.welch_bound},
        "settings": {"backend": backend, "tol": tol, "seed": seed},
        "checks": {},
    }
    spent: dict[str, float] = {}
    for name in ALL_CHECKS:
        if name not in checks:
            continue
        start = time.perf_counter()
        if name == "etf":
            result = check_etf(frame, tol)
        elif name == "signature":
            result = check_signature(frame, backend, tol)
        elif name == "triples":
            result = check_triples(frame, tol, seed)
        elif name == "covariance":
            result = check_covariance(frame, backend, max_k, max_nodes)
        else:
            result = check_roux(frame, backend, tol, r_max)
        report["checks"][name] = result
        spent[name] = time.perf_counter() - start
    report["pass"] = all(c.get("pass", False) for c in report["checks"].values())
    if timings:
        report["timings"] = {k: round(v, 6) for k, v in spent.items()}
    return _finite(report)


def _finite(obj):
    """Replace non-finite floats by None so the report is strict JSON."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj

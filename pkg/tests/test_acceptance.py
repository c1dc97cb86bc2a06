"""Acceptance criteria 1-10 at their stated tolerances.

Run with ``pytest tests/test_acceptance.py``; a summary section lists one
PASS/FAIL line per criterion.
"""

import math
import sys
import time

import numpy as np
import pytest

from etfkit import (
    Frame,
    check_signature_axioms,
    closed_form_normalized,
    gabor_steiner,
    gram,
    gram_closed_form,
    naimark_complement,
    onb,
    signature_of,
    simplex,
    switching_witness,
    verify_etf,
    welch_bound,
)
from etfkit.frames import random_unit_frame
from etfkit.roux import roux_theorem_harness
from etfkit.signature import apply_switching
from etfkit.symmetry import is_k_covariant
from etfkit.triples import (
    cocycle_identity_check,
    sum_identity_check,
    triple_covariance_obstruction,
    two_transitive_phase_test,
)
from oracles import welch

C1 = pytest.mark.criterion(1, "Gabor-Steiner ETF validity and coherence")
C2 = pytest.mark.criterion(2, "closed-form Gram equals computed Gram")
C3 = pytest.mark.criterion(3, "witness switching gives the normalized closed form")
C4 = pytest.mark.criterion(4, "signature axioms with top multiplicity d")
C5 = pytest.mark.criterion(5, "roux theorem harness")
C6 = pytest.mark.criterion(6, "triple-product sum and cocycle identities")
C7 = pytest.mark.criterion(7, "covariance theorem instances")
C8 = pytest.mark.criterion(8, "doubly transitive phases are 2n-th roots")
C9 = pytest.mark.criterion(9, "Naimark complement of G(3)")
C10 = pytest.mark.criterion(10, "Welch inequality and perturbation")

GABOR = {(3,): 1 / 2, (5,): 1 / 4, (7,): 1 / 6, (3, 3): 1 / 8}


def acceptance_etfs():
    frames = [gabor_steiner(m) for m in GABOR]
    frames += [simplex(d) for d in range(2, 6)]
    return frames


@C1
def test_criterion_1_gabor_steiner_validity():
    start = time.perf_counter()
    for m, mu in GABOR.items():
        f = gabor_steiner(m)
        v = verify_etf(f)
        n, d = f.n, f.d
        size = math.prod(m)
        assert (n, d) == (size**2, size * (size - 1) // 2)
        assert v.is_etf and v.saturates_welch, m
        assert abs(v.coherence - welch(n, d)) <= 1e-10
        assert abs(v.coherence - mu) <= 1e-10
    assert time.perf_counter() - start < 5


@C2
@pytest.mark.parametrize("m", [(3,), (5,), (3, 3)])
def test_criterion_2_closed_form_gram(m):
    cf = gram_closed_form(m)
    assert cf == gram(gabor_steiner(m), "exact")
    assert np.max(np.abs(cf.to_complex() - gram(gabor_steiner(m, exact=False)))) <= 1e-12


@C3
@pytest.mark.parametrize("m", [(3,), (5,), (3, 3)])
def test_criterion_3_witness_switching(m):
    s = signature_of(gabor_steiner(m), "exact")
    assert apply_switching(s, switching_witness(m)).entries == closed_form_normalized(m).entries


@C4
def test_criterion_4_signature_axioms():
    for f in acceptance_etfs():
        for backend in ("exact", "float") if f.exact is not None else ("float",):
            rep = check_signature_axioms(signature_of(f, backend), d=f.d)
            assert rep.passed, (f.n, f.d, backend, rep.failures)
    rep = check_signature_axioms(signature_of(gabor_steiner((3,))), d=3)
    (hi, mh), (lo, ml) = rep.spectrum.eigenvalues
    assert abs(hi - 4) <= 1e-9 and mh == 3
    assert abs(lo + 2) <= 1e-9 and ml == 6


@C5
@pytest.mark.parametrize("p, s", [(3, 0), (5, 0), (7, 0), (3, 1)])
@pytest.mark.parametrize("backend", ["exact", "float"])
def test_criterion_5_roux_harness(p, s, backend):
    start = time.perf_counter()
    rep = roux_theorem_harness(p, s, backend=backend)
    elapsed = time.perf_counter() - start
    assert rep.is_roux and rep.passed, rep.failure_reason
    assert [row.N for row in rep.per_power] == list(range(1, 2 * p + 1))
    assert all(row.distinct_count == 2 for row in rep.per_power)
    assert all(row.pattern_ok for row in rep.per_power)
    if (p, s) == (3, 1):
        assert elapsed < (60 if backend == "exact" else 5)


@C6
def test_criterion_6_triple_identities():
    for f in acceptance_etfs():
        si = sum_identity_check(f, tol=1e-10)
        assert si.passed and si.max_violation <= 1e-10
        co = cocycle_identity_check(f, samples=10_000, tol=1e-10, seed=0)
        assert co.passed and co.max_violation <= 1e-10
        assert co.details["mode"] == ("exhaustive" if f.n <= 12 else "sampled")
        if f.n > 12:
            assert co.details["tuples"] == 10_000


@C7
def test_criterion_7_covariance():
    for d in range(2, 6):
        assert is_k_covariant(simplex(d), 3)
    for d in range(1, 5):
        assert is_k_covariant(onb(d), min(3, d))
    assert is_k_covariant(onb(3), 3)
    g3 = gabor_steiner((3,))
    assert is_k_covariant(g3, 2)
    assert not is_k_covariant(g3, 3)
    for m in [(3,), (5,)]:
        rep = triple_covariance_obstruction(gabor_steiner(m))
        assert rep.passed and not rep.details["all_equal"]


@C8
def test_criterion_8_doubly_transitive_phases():
    rep = two_transitive_phase_test(gabor_steiner((3,)), tol=1e-9)
    assert rep.details["root_degree"] == 18
    assert rep.passed and rep.max_violation <= 1e-9


@C9
def test_criterion_9_naimark():
    f = gabor_steiner((3,)).unit_normalized()
    comp = naimark_complement(f)
    v = verify_etf(comp)
    assert (comp.n, comp.d) == (9, 6)
    assert v.is_etf and abs(v.coherence - 0.25) <= 1e-9
    back = naimark_complement(comp)
    assert np.max(np.abs(np.abs(gram(back)) - np.abs(gram(f)))) <= 1e-9


@C10
def test_criterion_10_welch():
    rng = np.random.default_rng(20240601)
    for _ in range(200):
        d = int(rng.integers(2, 20))
        n = int(rng.integers(d + 1, 21))
        f = random_unit_frame(d, n, rng)
        assert verify_etf(f).coherence >= welch_bound(n, d) - 1e-12
    f = gabor_steiner((3,)).unit_normalized()
    v = f.vectors.copy()
    c, s = math.cos(1e-3), math.sin(1e-3)
    v[0, 0], v[1, 0] = c * v[0, 0] - s * v[1, 0], s * v[0, 0] + c * v[1, 0]
    assert not verify_etf(Frame(v, f.labels, "unit")).saturates_welch


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

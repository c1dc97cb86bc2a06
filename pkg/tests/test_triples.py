import itertools
import math

import numpy as np
import pytest

from etfkit import Frame, gabor_steiner, onb, simplex
from etfkit.errors import NotEtf, NotTight, ZeroTripleProduct
from etfkit.frames import random_unit_frame
from etfkit.triples import (
    cocycle_identity_check,
    simplex_test,
    sum_identity_check,
    triple_covariance_obstruction,
    triple_products,
    two_transitive_phase_test,
)
from oracles import naive_gabor, triple_products as oracle_tp


def _distinct(n):
    return [t for t in itertools.product(range(n), repeat=3) if len(set(t)) == 3]


def test_triple_products_match_oracle():
    tp = triple_products(gabor_steiner((3,))).values
    assert np.allclose(tp, oracle_tp(naive_gabor((3,))))


def test_tp_examples():
    assert np.allclose(triple_products(onb(3)).distinct_values(), 0)
    assert np.allclose(triple_products(simplex(2)).distinct_values(), -1 / 8)
    t = triple_products(gabor_steiner((3,)))
    assert np.allclose(np.abs(t.distinct_values()), 1 / 8)
    assert t.magnitude_class == pytest.approx(1 / 8)


@pytest.mark.parametrize("frame", [gabor_steiner((3,)), simplex(3), random_unit_frame(3, 5, np.random.default_rng(1))])
def test_tp_symmetries(frame):
    tp = triple_products(frame).values
    assert np.allclose(tp, np.transpose(tp, (1, 2, 0)), atol=1e-14)
    assert np.allclose(tp, np.conj(np.transpose(tp, (0, 2, 1))), atol=1e-14)


def test_sum_identity_examples():
    rep = sum_identity_check(gabor_steiner((3,)))
    assert rep.passed and rep.max_violation <= 1e-10
    tp = oracle_tp(naive_gabor((3,)))
    assert tp[0, 1].sum() == pytest.approx(3 / 4)
    tp2 = oracle_tp(simplex(2).vectors)
    assert tp2[0, 1].sum() == pytest.approx(3 / 8)
    assert 2 * (1 / 4) + (-1 / 8) == pytest.approx(3 / 8)
    rep_onb = sum_identity_check(onb(4))
    assert rep_onb.passed and rep_onb.max_violation == 0


def test_sum_identity_needs_tight_frame():
    with pytest.raises(NotTight):
        sum_identity_check(random_unit_frame(2, 5, np.random.default_rng(0)))


def test_cocycle_g3_exhaustive():
    rep = cocycle_identity_check(gabor_steiner((3,)))
    assert rep.passed and rep.max_violation <= 1e-10
    assert rep.details["mode"] == "exhaustive" and rep.details["tuples"] == 3024 == math.perm(9, 4)


def test_cocycle_simplex3():
    rep = cocycle_identity_check(simplex(3))
    assert rep.passed
    tp = triple_products(simplex(3)).distinct_values()
    assert np.allclose(tp / np.abs(tp), -1)


def test_cocycle_onb_reports_zero():
    rep = cocycle_identity_check(onb(4))
    assert not rep.passed and rep.max_violation is None
    assert rep.details["error"] == "ZeroTripleProduct"


def test_cocycle_sampled_is_seeded():
    f = gabor_steiner((5,))
    a = cocycle_identity_check(f, samples=500, seed=3)
    b = cocycle_identity_check(f, samples=500, seed=3)
    assert a.details["mode"] == "sampled" and a.max_violation == b.max_violation
    assert a.passed


def test_simplex_test_examples():
    assert simplex_test(simplex(5))
    assert not simplex_test(gabor_steiner((3,)))
    assert not simplex_test(onb(3))


def test_obstruction_examples():
    rep = triple_covariance_obstruction(simplex(4))
    assert rep.passed and rep.details["all_equal"]
    assert np.allclose(triple_products(simplex(4)).distinct_values(), -1 / 64)
    for m in [(3,), (5,)]:
        rep = triple_covariance_obstruction(gabor_steiner(m))
        assert rep.passed and not rep.details["all_equal"] and not rep.details["predicted_equal"]
    rep = triple_covariance_obstruction(onb(5))
    assert rep.passed and rep.details["all_equal"]


def test_two_transitive_phase_g3():
    rep = two_transitive_phase_test(gabor_steiner((3,)))
    assert rep.passed and rep.max_violation <= 1e-9
    tp = oracle_tp(naive_gabor((3,)))
    for j, k, l in _distinct(9):
        z = tp[j, k, l] / abs(tp[j, k, l])
        assert abs(z**18 - 1) < 1e-9
    assert sum(rep.details["phase_orders"].values()) == 9 * 8 * 7


def test_two_transitive_phase_simplex3():
    rep = two_transitive_phase_test(simplex(3))
    assert rep.passed and rep.details["phase_orders"] == {"2": 24}


def test_two_transitive_errors():
    with pytest.raises(NotEtf):
        two_transitive_phase_test(random_unit_frame(3, 7, np.random.default_rng(4)))
    with pytest.raises(ZeroTripleProduct):
        two_transitive_phase_test(onb(3))


def test_obstruction_requires_etf():
    with pytest.raises(NotEtf):
        triple_covariance_obstruction(Frame(np.array([[1, 1, 0], [0, 1, 1]], dtype=complex), norm_convention="raw"))

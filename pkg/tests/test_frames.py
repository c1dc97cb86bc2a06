import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etfkit import Frame, gabor_steiner, gram, naimark_complement, onb, simplex, verify_etf, welch_bound
from etfkit.errors import FullDimension, InvalidShape, NotTight
from etfkit.frames import random_unit_frame
from oracles import naive_gabor, naive_gram, welch


def test_gram_examples():
    assert np.array_equal(gram(onb(3)), np.eye(3))
    g = gram(gabor_steiner((3,)))
    assert np.allclose(np.diag(g), 2)
    off = g[~np.eye(9, dtype=bool)]
    assert np.allclose(np.abs(off), 1)
    assert np.allclose(g, naive_gram(naive_gabor((3,))))
    single = Frame(np.array([[1.0], [0.0]]))
    assert np.array_equal(gram(single), np.array([[1.0]]))


def test_gram_exact_matches_float():
    f = gabor_steiner((5,))
    assert np.allclose(gram(f, "exact").to_complex(), gram(f))


@pytest.mark.parametrize("n, d", [(9, 3), (4, 3), (25, 10), (3, 2), (7, 3), (81, 36)])
def test_welch_bound_formula(n, d):
    assert welch_bound(n, d) == pytest.approx(welch(n, d))


def test_welch_bound_degenerate():
    assert welch_bound(4, 4) == 0
    assert welch_bound(1, 1) == 0


def test_verify_onb():
    v = verify_etf(onb(4))
    assert v.is_tight and v.is_equiangular and v.is_etf
    assert v.coherence == 0 and v.welch_bound == 0 and v.saturates_welch


def test_verify_g3():
    v = verify_etf(gabor_steiner((3,)))
    assert v.is_etf
    assert v.coherence == pytest.approx(0.5, abs=1e-12)
    assert v.welch_bound == pytest.approx(math.sqrt(6 / 24))
    assert v.saturates_welch and v.gerzon_ok


def test_verify_simplex3():
    v = verify_etf(simplex(3))
    assert v.is_etf and v.saturates_welch
    assert v.coherence == pytest.approx(1 / 3, abs=1e-12)


def test_simplex_small_cases():
    g = gram(simplex(2))
    assert g.shape == (3, 3)
    assert np.allclose(g[~np.eye(3, dtype=bool)], -0.5)
    g1 = gram(simplex(1))
    assert g1.shape == (2, 2) and g1[0, 1] == pytest.approx(-1)
    assert np.allclose(gram(onb(2)), np.eye(2))


@pytest.mark.parametrize("d", range(1, 7))
def test_simplex_is_etf(d):
    f = simplex(d)
    assert (f.d, f.n) == (d, d + 1)
    v = verify_etf(f)
    assert v.is_etf and v.saturates_welch
    assert v.coherence == pytest.approx(1 / d)


def test_single_vector_is_flagged_not_raised():
    v = verify_etf(Frame(np.array([[1.0], [0.0]])))
    assert any("DegenerateInput" in flag for flag in v.flags)


def test_naimark_g3():
    comp = naimark_complement(gabor_steiner((3,)).unit_normalized())
    assert (comp.d, comp.n) == (6, 9)
    v = verify_etf(comp)
    assert v.is_etf and v.coherence == pytest.approx(0.25, abs=1e-9)


def test_naimark_simplex2():
    comp = naimark_complement(simplex(2))
    assert (comp.d, comp.n) == (1, 3)
    g = np.abs(gram(comp))
    assert np.allclose(g, 1)


def test_naimark_double_complement_keeps_gram_magnitudes():
    f = gabor_steiner((3,)).unit_normalized()
    back = naimark_complement(naimark_complement(f))
    assert np.allclose(np.abs(gram(back)), np.abs(gram(f)), atol=1e-9)


def test_naimark_errors():
    with pytest.raises(FullDimension):
        naimark_complement(onb(3))
    with pytest.raises(NotTight):
        naimark_complement(random_unit_frame(2, 5, np.random.default_rng(0)))


def test_invalid_frames():
    with pytest.raises((InvalidShape, ValueError)):
        Frame(np.zeros((2, 2)))
    with pytest.raises((InvalidShape, ValueError)):
        Frame(np.ones(3))


def test_json_round_trip_is_bit_exact(tmp_path):
    f = gabor_steiner((5,)).unit_normalized()
    path = tmp_path / "f.json"
    f.dump(path)
    back = Frame.load(path)
    assert np.array_equal(back.vectors, f.vectors)
    assert back.labels == f.labels and back.norm_convention == f.norm_convention


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 19), st.integers(1, 18), st.integers(0, 2**31))
def test_random_frames_respect_welch(d, extra, seed):
    n = min(d + extra, 20)
    if n <= d:
        return
    f = random_unit_frame(d, n, np.random.default_rng(seed))
    assert verify_etf(f).coherence >= welch_bound(n, d) - 1e-12


def test_perturbation_breaks_saturation():
    f = gabor_steiner((3,)).unit_normalized()
    v = f.vectors.copy()
    c, s = math.cos(1e-3), math.sin(1e-3)
    v[0, 0], v[1, 0] = c * v[0, 0] - s * v[1, 0], s * v[0, 0] + c * v[1, 0]
    verdict = verify_etf(Frame(v, f.labels, "unit"))
    assert not verdict.saturates_welch and not verdict.is_etf

import numpy as np
import pytest

from etfkit import GroupShape, fiducial, gabor_steiner, gram, gram_closed_form, rep_pi, verify_etf
from etfkit.cyclo import CycloMatrix, root_of_unity
from etfkit.errors import IndexOutOfRange, InvalidShape
from etfkit.gabor import (
    fiducial_index_set,
    modulation,
    orbit_shift_permutation,
    reflect,
    translation,
)
from oracles import closed_form_gram, naive_fiducial, naive_gabor, naive_pi, zeta

SHAPES = [(3,), (5,), (3, 3)]


def test_shape_validation_and_parse():
    assert GroupShape.parse("3,5").m == (3, 5)
    s = GroupShape((3, 3))
    assert (s.size, s.n, s.d, s.order) == (9, 81, 36, 3)
    for bad in [(4,), (1,), (3, 2), ()]:
        with pytest.raises(InvalidShape):
            GroupShape(bad)
    with pytest.raises(InvalidShape):
        GroupShape.parse("3,x")


def test_translation_and_modulation_examples():
    x = np.array([1, 0, -1])
    assert np.array_equal(translation((3,), (1,)) @ x, [-1, 1, 0])
    assert np.allclose(modulation((3,), (1,)) @ x, [1, 0, -zeta(3, 2)])
    assert np.array_equal(translation((3, 5), (0, 0)), np.eye(15))
    assert np.array_equal(modulation((3, 5), (0, 0)), np.eye(15))


@pytest.mark.parametrize("m", [(3,), (5,), (3, 5)])
def test_operators_match_oracle(m):
    rng = np.random.default_rng(0)
    for _ in range(4):
        k = tuple(int(rng.integers(0, x)) for x in m)
        c = tuple(int(rng.integers(0, x)) for x in m)
        assert np.allclose(rep_pi(m, k, c), naive_pi(m, k, c))


def test_rep_pi_examples():
    p = rep_pi((3,), (1,), (2,))
    assert p.shape == (3, 3)
    assert np.allclose(p, modulation((3,), (2,)) @ translation((3,), (1,)))
    q = rep_pi((5,), (2,), (1,))
    assert q.shape == (10, 10)
    assert np.allclose(q[:5, :5], q[5:, 5:]) and np.allclose(q[:5, 5:], 0)
    assert np.array_equal(rep_pi((3, 3), (0, 0), (0, 0)), np.eye(36))


def test_rep_pi_index_check():
    with pytest.raises(IndexOutOfRange):
        rep_pi((3,), (3,), (0,))
    with pytest.raises(IndexOutOfRange):
        rep_pi((3, 3), (0,), (0, 0))


@pytest.mark.parametrize("m", SHAPES)
def test_rep_pi_unitary_exact(m):
    shape = GroupShape(m)
    for k, c in shape.pairs[:: max(1, shape.n // 12)]:
        u = rep_pi(shape, k, c, backend="exact")
        assert isinstance(u, CycloMatrix)
        assert u @ u.H == CycloMatrix.identity(shape.order, shape.d)


@pytest.mark.parametrize("m", [(3,), (5,), (3, 3)])
def test_projective_representation(m):
    shape = GroupShape(m)
    rng = np.random.default_rng(5)
    for _ in range(5):
        a, b = (shape.pairs[int(i)] for i in rng.integers(0, shape.n, 2))
        prod = rep_pi(shape, *a) @ rep_pi(shape, *b)
        k = tuple((x + y) % q for x, y, q in zip(a[0], b[0], m))
        c = tuple((x + y) % q for x, y, q in zip(a[1], b[1], m))
        target = rep_pi(shape, k, c)
        phase = np.vdot(target[:, 0], prod[:, 0]) / np.vdot(target[:, 0], target[:, 0])
        assert np.allclose(prod, phase * target)
        assert abs(phase ** shape.order - 1) < 1e-9


def test_fiducial_examples():
    assert np.array_equal(fiducial((3,)), [1, 0, -1])
    assert fiducial_index_set((3, 3)) == [(0, 0), (0, 1), (0, 2), (1, 0)]
    psi = fiducial((3, 3))
    assert psi[0] == 1 and psi[8] == -1 and np.count_nonzero(psi[:9]) == 2


@pytest.mark.parametrize("m", [(3,), (5,), (7,), (3, 3), (3, 5), (5, 3)])
def test_fiducial_properties(m):
    shape = GroupShape(m)
    for i in fiducial_index_set(shape):
        assert reflect(shape, i) != i
    psi = fiducial(shape)
    assert np.array_equal(psi, naive_fiducial(m).real)
    assert psi @ psi == shape.size - 1


@pytest.mark.parametrize("m, n, d, mu", [((3,), 9, 3, 1 / 2), ((5,), 25, 10, 1 / 4), ((3, 3), 81, 36, 1 / 8)])
def test_gabor_steiner_sizes(m, n, d, mu):
    f = gabor_steiner(m)
    assert (f.n, f.d) == (n, d)
    assert np.allclose(f.norms(), np.sqrt(GroupShape(m).size - 1))
    v = verify_etf(f)
    assert v.is_etf and v.coherence == pytest.approx(mu, abs=1e-10)
    assert f.labels[1] == "(" + ",".join("0" * len(m)) + ";" + ",".join(["0"] * (len(m) - 1) + ["1"]) + ")"


@pytest.mark.parametrize("m", SHAPES)
def test_orbit_matches_oracle(m):
    f = gabor_steiner(m)
    assert np.allclose(f.vectors, naive_gabor(m), atol=1e-12)
    assert np.allclose(f.exact.to_complex(), f.vectors, atol=1e-12)


def test_gram_closed_form_examples():
    g = gram_closed_form((3,))
    # row (0,0), column (0,1): <psi, M psi> = 1 + zeta_3 = -zeta_3^2
    assert g[1, 0] == -root_of_unity(3, 2)
    assert complex(g[1, 0]) == pytest.approx(-zeta(3, 2))
    psi = fiducial((3,)).astype(complex)
    mpsi = modulation((3,), (1,)) @ psi
    assert complex(g[1, 0]) == pytest.approx(np.vdot(mpsi, psi))
    assert all(x == 2 for x in g.diagonal())


@pytest.mark.parametrize("m", SHAPES + [(7,)])
def test_gram_closed_form_exact_and_float(m):
    f = gabor_steiner(m)
    cf = gram_closed_form(m)
    assert cf == gram(f, "exact")
    assert np.max(np.abs(cf.to_complex() - gram(gabor_steiner(m, exact=False)))) <= 1e-12
    if m != (7,):
        assert np.allclose(cf.to_complex(), closed_form_gram(m))


@pytest.mark.parametrize("m", [(3,), (3, 3)])
def test_offdiagonal_gram_unimodular(m):
    g = gram(gabor_steiner(m))
    assert np.allclose(np.abs(g[~np.eye(g.shape[0], dtype=bool)]), 1)


def test_orbit_shift_permutation_maps_columns():
    shape = GroupShape((3,))
    f = gabor_steiner(shape)
    perm = orbit_shift_permutation(shape, (1,), (2,))
    u = rep_pi(shape, (1,), (2,))
    moved = u @ f.vectors
    for j, target in enumerate(perm):
        phase = np.vdot(f.vectors[:, target], moved[:, j]) / 2
        assert abs(abs(phase) - 1) < 1e-12
        assert np.allclose(moved[:, j], phase * f.vectors[:, target])

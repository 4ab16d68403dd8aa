import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mixedphase import algebra
from mixedphase.errors import NotHermitian, NotPositive, ShapeMismatch

RTOL = 1e-10
ATOL = 1e-10

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def hermitian_matrices(n):
    return arrays(np.float64, (2, n, n), elements=finite).map(
        lambda parts: (parts[0] + parts[0].T) / 2 + 1j * (parts[1] - parts[1].T) / 2
    )


def test_max_abs_and_trace():
    m = np.array([[1.0, -3.0], [2.0, 0.5]])
    assert algebra.max_abs(m) == 3.0
    assert algebra.trace(m) == pytest.approx(1.5)


def test_adjoint():
    m = np.array([[1.0, 2.0 + 1j], [0.0, -1j]])
    np.testing.assert_allclose(algebra.adjoint(m), m.conj().T)


def test_eig_hermitian_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        algebra.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ShapeMismatch):
        algebra.eig_hermitian(np.zeros((2, 3)))


def test_eig_hermitian_descending_order():
    m = np.diag([0.1, 0.7, 0.2])
    dec = algebra.eig_hermitian(m)
    np.testing.assert_allclose(dec.eigenvalues, [0.7, 0.2, 0.1])


@settings(max_examples=40, deadline=None)
@given(hermitian_matrices(4))
def test_eig_hermitian_reconstructs(m):
    dec = algebra.eig_hermitian(m)
    np.testing.assert_allclose(dec.reconstruct(), m, rtol=0, atol=1e-9)
    v = dec.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), rtol=0, atol=1e-9)
    assert np.all(np.diff(dec.eigenvalues) <= 1e-12)


def test_gauge_fix_is_deterministic():
    # Same subspace entered with different column phases must come out identical.
    rng = np.random.default_rng(5)
    m = random_hermitian(rng, 5)
    dec1 = algebra.eig_hermitian(m)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
    # eigh of a rescrambled copy; eigenvectors are free up to phase
    dec2 = algebra.eig_hermitian(m + 0.0)
    np.testing.assert_allclose(dec1.eigenvectors, dec2.eigenvectors, atol=1e-12)
    for j in range(5):
        col = dec1.eigenvectors[:, j]
        pivot = col[int(np.argmax(np.abs(col)))]
        assert pivot.imag == pytest.approx(0.0, abs=1e-12)
        assert pivot.real >= 0


def test_psd_root_square():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    p = a @ a.conj().T
    p /= np.trace(p).real
    s = algebra.psd_root(p, 2)
    np.testing.assert_allclose(s @ s, p, rtol=0, atol=1e-10)


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_psd_root_higher_orders(l):
    p = np.diag([0.5, 0.3, 0.2])
    s = algebra.psd_root(p, l)
    np.testing.assert_allclose(np.linalg.matrix_power(s, l), p, rtol=0, atol=1e-12)


def test_psd_root_clamps_eigenvalue_dust():
    # -1e-13 is numerical noise, not a genuine negative eigenvalue
    p = np.diag([1.0, -1e-13])
    s = algebra.psd_root(p, 2)
    assert s[1, 1] == 0.0


def test_psd_root_rejects_negative():
    with pytest.raises(NotPositive):
        algebra.psd_root(np.diag([1.0, -0.2]), 2)


def test_psd_root_order_one_is_identity_map():
    p = np.diag([0.7, 0.3])
    np.testing.assert_allclose(algebra.psd_root(p, 1), p, atol=1e-14)


def test_psd_root_rejects_bad_order():
    with pytest.raises(ValueError):
        algebra.psd_root(np.eye(2), 0)


@settings(max_examples=30, deadline=None)
@given(hermitian_matrices(3), st.floats(min_value=-3.0, max_value=3.0))
def test_expm_generator_unitary(h, t):
    u = algebra.expm_generator(h, t)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(3), rtol=0, atol=1e-9)


def test_expm_generator_pauli_z():
    u = algebra.expm_generator(np.diag([1.0, -1.0]), np.pi / 2)
    np.testing.assert_allclose(u, np.diag([-1j, 1j]), atol=1e-12)


def test_expm_generator_composes():
    rng = np.random.default_rng(3)
    h = random_hermitian(rng, 3)
    u1 = algebra.expm_generator(h, 0.4)
    u2 = algebra.expm_generator(h, 0.6)
    np.testing.assert_allclose(u1 @ u2, algebra.expm_generator(h, 1.0), atol=1e-11)


def test_orthonormal_defect():
    assert algebra.orthonormal_defect(np.eye(3)) < 1e-15
    skew = np.eye(3)
    skew[0, 1] = 0.1
    assert algebra.orthonormal_defect(skew) > 0.05


def test_det_of_unitary_is_unimodular():
    h = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, -0.5]])
    u = algebra.expm_generator(h, 1.7)
    assert abs(abs(algebra.det(u)) - 1.0) < 1e-12

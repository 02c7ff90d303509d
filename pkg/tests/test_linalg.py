import numpy as np
import pytest

from esdsim.errors import NotHermitian
from esdsim.linalg import (
    I2,
    I4,
    SX,
    SY,
    SZ,
    charpoly_eigvalsh,
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
)

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_PLUS_PROJ = np.outer(PHI_PLUS, PHI_PLUS.conj())


def random_hermitian(rng, dim=4):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def test_eig_identity():
    vals, vecs = hermitian_eig(I4)
    assert np.allclose(vals, np.ones(4), atol=1e-14)
    assert np.allclose(vecs @ vecs.conj().T, I4, atol=1e-12)


def test_eig_diagonal():
    vals, vecs = hermitian_eig(np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex))
    assert np.allclose(vals, [1, 2, 3, 4], atol=1e-14)
    # standard basis vectors up to phase
    assert np.allclose(np.abs(vecs), I4.real, atol=1e-12)


def test_eig_bell_partial_transpose_spectrum():
    vals, _ = hermitian_eig(partial_transpose(PHI_PLUS_PROJ, "B"))
    assert np.allclose(vals, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_eig_rejects_non_hermitian():
    bad = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotHermitian):
        hermitian_eig(bad)


def test_eig_random_residuals_and_trace():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m = random_hermitian(rng)
        nrm = np.linalg.norm(m)
        vals, vecs = hermitian_eig(m)
        residual = np.linalg.norm(m - (vecs * vals) @ vecs.conj().T)
        assert residual <= 1e-10 * nrm
        assert np.linalg.norm(vecs.conj().T @ vecs - I4) <= 1e-10
        assert abs(np.trace(m).real - vals.sum()) <= 1e-10 * max(nrm, 1.0)
        assert np.all(np.diff(vals) >= -1e-14)


def test_eig_2x2_and_zero_matrix():
    vals, _ = hermitian_eig(SZ)
    assert np.allclose(vals, [-1, 1], atol=1e-14)
    vals, vecs = hermitian_eig(np.zeros((4, 4), dtype=complex))
    assert np.allclose(vals, 0.0)
    assert np.allclose(vecs, I4)


def test_charpoly_agrees_with_jacobi():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_hermitian(rng)
        v1, _ = hermitian_eig(m)
        v2 = charpoly_eigvalsh(m)
        assert np.allclose(v1, v2, atol=1e-9 * max(np.linalg.norm(m), 1.0))


def test_kron_basics():
    assert np.allclose(kron(I2, I2), I4)
    assert np.allclose(kron(SZ, SZ), np.diag([1, -1, -1, 1]))
    assert np.allclose(kron(SX, SX), np.fliplr(I4.real))


def test_kron_index_convention():
    a = np.arange(4, dtype=complex).reshape(2, 2)
    b = np.arange(4, 8, dtype=complex).reshape(2, 2)
    k = kron(a, b)
    for i in range(2):
        for j in range(2):
            for kk in range(2):
                for ll in range(2):
                    assert k[2 * i + kk, 2 * j + ll] == a[i, j] * b[kk, ll]


def test_kron_bilinear():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b, c = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3))
        lhs = kron(a + b, c)
        rhs = kron(a, c) + kron(b, c)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_partial_transpose_properties():
    assert np.allclose(partial_transpose(I4 / 4, "A"), I4 / 4)
    assert np.allclose(partial_transpose(I4 / 4, "B"), I4 / 4)
    rng = np.random.default_rng(5)
    for sub in ("A", "B"):
        m = random_hermitian(rng)
        pt = partial_transpose(m, sub)
        assert np.allclose(partial_transpose(pt, sub), m)  # involution
        assert abs(np.trace(pt) - np.trace(m)) <= 1e-14
        assert np.linalg.norm(pt - pt.conj().T) <= 1e-14


def test_partial_transpose_matches_explicit_tensor_form():
    rng = np.random.default_rng(9)
    a = random_hermitian(rng, 2)
    b = random_hermitian(rng, 2)
    assert np.allclose(partial_transpose(kron(a, b), "B"), kron(a, b.T))
    assert np.allclose(partial_transpose(kron(a, b), "A"), kron(a.T, b))


def test_partial_trace():
    rng = np.random.default_rng(13)
    rho_a = random_hermitian(rng, 2)
    rho_a = rho_a @ rho_a.conj().T
    rho_a /= np.trace(rho_a).real
    rho_b = random_hermitian(rng, 2)
    rho_b = rho_b @ rho_b.conj().T
    rho_b /= np.trace(rho_b).real
    prod = kron(rho_a, rho_b)
    assert np.allclose(partial_trace(prod, "A"), rho_a, atol=1e-12)
    assert np.allclose(partial_trace(prod, "B"), rho_b, atol=1e-12)
    assert np.allclose(partial_trace(PHI_PLUS_PROJ, "A"), I2 / 2, atol=1e-12)
    assert np.allclose(partial_trace(I4 / 4, "B"), I2 / 2, atol=1e-12)
    # trace preserved even off the unit-trace case (Choi matrices have trace 2)
    m = random_hermitian(rng)
    assert abs(np.trace(partial_trace(m, "A")) - np.trace(m)) <= 1e-12

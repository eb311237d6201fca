"""Tests for the dense linear-algebra kernel."""

import numpy as np
import pytest

from trottersim.linalg import (
    I2,
    KET_0,
    KET_1,
    SIGMA_MINUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    dag,
    density,
    eigh,
    expm,
    is_hermitian,
    kron,
    partial_trace,
    unvec,
    validate_density_matrix,
    vec,
)


def series_expm(m, terms=60):
    """Independent oracle: plain Taylor sum, accurate for small-norm input."""
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


def random_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_hermitian(rng, d):
    m = random_complex(rng, d)
    return (m + dag(m)) / 2


# ---------------------------------------------------------------- kron


def test_kron_identity():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))


def test_kron_diagonal():
    a = np.diag([1.0, 2.0])
    b = np.diag([3.0, 4.0])
    np.testing.assert_allclose(kron(a, b), np.diag([3.0, 4.0, 6.0, 8.0]))


def test_kron_sigma_x_sigma_z_block_structure():
    m = kron(SIGMA_X, SIGMA_Z)
    # sigma_x swaps the blocks, sigma_z fills each off-diagonal block.
    np.testing.assert_allclose(m[:2, :2], np.zeros((2, 2)))
    np.testing.assert_allclose(m[2:, 2:], np.zeros((2, 2)))
    np.testing.assert_allclose(m[:2, 2:], SIGMA_Z)
    np.testing.assert_allclose(m[2:, :2], SIGMA_Z)


def test_kron_vector_identity_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = random_complex(rng, 2)
        b = random_complex(rng, 3)
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        np.testing.assert_allclose(
            kron(a, b) @ np.kron(u, v), np.kron(a @ u, b @ v), atol=1e-12
        )


# ---------------------------------------------------------- partial trace


def test_partial_trace_product_state():
    rng = np.random.default_rng(3)
    rho_a = density(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    rho_b = density(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    joint = kron(rho_a, rho_b)
    np.testing.assert_allclose(partial_trace(joint, (2, 2), 0), rho_a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(joint, (2, 2), 1), rho_b, atol=1e-12)


def test_partial_trace_maximally_mixed():
    np.testing.assert_allclose(
        partial_trace(np.eye(4) / 4, (2, 2), 1), np.eye(2) / 2, atol=1e-14
    )


def test_partial_trace_bell_state():
    phi = (np.kron(KET_0, KET_0) + np.kron(KET_1, KET_1)) / np.sqrt(2)
    rho = np.outer(phi, phi.conj())
    np.testing.assert_allclose(partial_trace(rho, (2, 2), 0), np.eye(2) / 2, atol=1e-14)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(11)
    m = random_complex(rng, 6)
    for keep in (0, 1):
        reduced = partial_trace(m, (2, 3), keep)
        np.testing.assert_allclose(np.trace(reduced), np.trace(m), atol=1e-12)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2, 3), 0)


def test_partial_trace_preserves_positivity():
    rng = np.random.default_rng(5)
    for _ in range(50):
        a = random_complex(rng, 4)
        psd = a @ dag(a)
        for keep in (0, 1):
            w = np.linalg.eigvalsh(partial_trace(psd, (2, 2), keep))
            assert w.min() >= -1e-10


# ----------------------------------------------------------------- expm


def test_expm_zero():
    np.testing.assert_allclose(expm(np.zeros((3, 3))), np.eye(3), atol=1e-14)


def test_expm_diagonal():
    m = np.diag([0.0, -1.0, -1.0, 0.0])
    np.testing.assert_allclose(
        expm(m), np.diag([1.0, np.e**-1, np.e**-1, 1.0]), atol=1e-13
    )


def test_expm_nilpotent():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(expm(m), np.array([[1.0, 1.0], [0.0, 1.0]]), atol=1e-14)


def test_expm_rotation():
    theta = 0.7
    rx = expm(-1j * theta / 2 * SIGMA_X)
    expected = np.cos(theta / 2) * I2 - 1j * np.sin(theta / 2) * SIGMA_X
    np.testing.assert_allclose(rx, expected, atol=1e-13)


def test_expm_matches_series_oracle():
    rng = np.random.default_rng(19)
    for _ in range(30):
        m = 0.3 * random_complex(rng, 4)
        got = expm(m)
        want = series_expm(m)
        assert np.linalg.norm(got - want) <= 1e-12 * max(1.0, np.linalg.norm(want))


def test_expm_large_norm_matches_series_of_scaled():
    rng = np.random.default_rng(23)
    m = 8.0 * random_complex(rng, 3)
    # Oracle: exp(m) = exp(m/32)^32 with the plain series on the small factor.
    small = series_expm(m / 32)
    want = np.linalg.matrix_power(small, 32)
    np.testing.assert_allclose(expm(m), want, atol=1e-9 * np.linalg.norm(want))


def test_expm_of_i_hermitian_is_unitary():
    rng = np.random.default_rng(29)
    for _ in range(25):
        h = random_hermitian(rng, 4)
        u = expm(1j * h)
        np.testing.assert_allclose(u @ dag(u), np.eye(4), atol=1e-10)


def test_expm_additive_for_commuting_inputs():
    rng = np.random.default_rng(31)
    for _ in range(25):
        a = random_hermitian(rng, 3)
        p = rng.standard_normal(3)
        b = p[0] * np.eye(3) + p[1] * a + p[2] * a @ a
        assert np.linalg.norm(a @ b - b @ a) < 1e-12
        np.testing.assert_allclose(expm(a + b), expm(a) @ expm(b), atol=1e-10)


def test_expm_rejects_non_square():
    with pytest.raises(ValueError):
        expm(np.zeros((2, 3)))


# ----------------------------------------------------------------- eigh


def test_eigh_sigma_z():
    w, _ = eigh(SIGMA_Z)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)


def test_eigh_maximally_mixed():
    w, _ = eigh(I2 / 2)
    np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-14)


def test_eigh_sigma_x_eigenvectors():
    w, v = eigh(SIGMA_X)
    np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)
    minus = (KET_0 - KET_1) / np.sqrt(2)
    plus = (KET_0 + KET_1) / np.sqrt(2)
    # Compare up to global phase via overlap magnitude.
    assert abs(np.vdot(minus, v[:, 0])) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(plus, v[:, 1])) == pytest.approx(1.0, abs=1e-12)


def test_eigh_reconstruction_many_random():
    rng = np.random.default_rng(37)
    for _ in range(1000):
        d = int(rng.integers(2, 9))
        m = random_hermitian(rng, d)
        w, v = eigh(m)
        assert np.all(np.diff(w) >= -1e-14)
        recon = v @ np.diag(w) @ dag(v)
        assert np.linalg.norm(recon - m) <= 1e-10


def test_eigh_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


# ------------------------------------------------------------ vec/unvec


def test_vec_column_stacking():
    m = np.array([[1, 2], [3, 4]], dtype=complex)
    np.testing.assert_array_equal(vec(m), [1, 3, 2, 4])
    np.testing.assert_array_equal(unvec(vec(m)), m)


def test_vec_superoperator_convention():
    # vec(A rho B) = (B^T kron A) vec(rho), the fixed global convention.
    rng = np.random.default_rng(41)
    for _ in range(25):
        a = random_complex(rng, 3)
        b = random_complex(rng, 3)
        rho = random_complex(rng, 3)
        np.testing.assert_allclose(
            kron(b.T, a) @ vec(rho), vec(a @ rho @ b), atol=1e-12
        )


def test_unvec_rejects_non_square_length():
    with pytest.raises(ValueError):
        unvec(np.arange(5))


# ------------------------------------------------- density-matrix checks


def test_validate_density_matrix_accepts_physical_states():
    rng = np.random.default_rng(43)
    for _ in range(20):
        kets = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(3)]
        probs = rng.random(3)
        probs /= probs.sum()
        rho = sum(p * density(k) for p, k in zip(probs, kets))
        validate_density_matrix(rho)


def test_validate_density_matrix_rejects_bad_trace():
    with pytest.raises(ValueError, match="trace"):
        validate_density_matrix(2 * density(KET_0))


def test_validate_density_matrix_rejects_non_hermitian():
    m = np.array([[0.5, 0.5], [0.0, 0.5]])
    with pytest.raises(ValueError, match="Hermitian"):
        validate_density_matrix(m)


def test_validate_density_matrix_rejects_negative_eigenvalue():
    m = np.diag([1.5, -0.5])
    with pytest.raises(ValueError, match="negative"):
        validate_density_matrix(m)


def test_is_hermitian():
    assert is_hermitian(SIGMA_Y)
    assert not is_hermitian(SIGMA_MINUS)

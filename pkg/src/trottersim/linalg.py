"""Dense complex linear algebra kernel for small (dim <= 16) matrices.

Everything downstream (superoperators, channels, dilation circuits) is built
on plain complex ndarrays plus the checks in this module. The vectorization
convention is fixed once here and used everywhere: ``vec`` stacks columns,
so the superoperator acting as ``A @ rho @ B`` on a vectorized state is
``kron(B.T, A)``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "I2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_MINUS",
    "KET_0",
    "KET_1",
    "dag",
    "kron",
    "vec",
    "unvec",
    "partial_trace",
    "expm",
    "eigh",
    "is_hermitian",
    "validate_density_matrix",
    "density",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# Lowering operator |0><1| in the sigma_z eigenbasis with |0> the +1 state.
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices (dims multiply)."""
    return np.kron(np.asarray(a), np.asarray(b))


def density(ket: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |psi><psi| from a (not necessarily normalized) ket."""
    ket = np.asarray(ket, dtype=complex).ravel()
    norm = np.linalg.norm(ket)
    if norm == 0:
        raise ValueError("cannot build a density matrix from the zero vector")
    ket = ket / norm
    return np.outer(ket, ket.conj())


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: vec(|i><j|) = e_j (x) e_i."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec` for square matrices."""
    v = np.asarray(v).ravel()
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((d, d), order="F")


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    Args:
        m: Square matrix on the composite space, shape (dA*dB, dA*dB),
            with subsystem A the slower (leftmost) Kronecker factor.
        dims: Subsystem dimensions (dA, dB).
        keep: Index of the subsystem to keep, 0 for A or 1 for B.

    Returns:
        The reduced operator on the kept subsystem. Its trace equals Tr(m).

    Raises:
        ValueError: If the shape does not match dims or keep is not 0/1.
    """
    m = np.asarray(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    r = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ikjk->ij", r)
    if keep == 1:
        return np.einsum("kikj->ij", r)
    raise ValueError(f"keep must be 0 or 1, got {keep}")


def expm(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a truncated series.

    Dimensions here are tiny (<= 16), so the plain Taylor series after
    scaling the norm below 1/2 is both robust and fast enough; the series is
    summed until the term norm falls below ``tol`` relative to the partial
    sum, then the result is squared back up.

    Args:
        m: Square matrix.
        tol: Relative truncation tolerance for the scaled series.

    Returns:
        exp(m) to relative accuracy ~tol.

    Raises:
        ValueError: If m is not square.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expm requires a square matrix, got shape {m.shape}")
    d = m.shape[0]
    norm = np.linalg.norm(m, ord=np.inf)
    # Scale so the series converges fast: ||m / 2^s|| <= 0.5.
    s = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    a = m / (2**s)
    out = np.eye(d, dtype=complex)
    term = np.eye(d, dtype=complex)
    for k in range(1, 64):
        term = term @ a / k
        out = out + term
        if np.linalg.norm(term, ord=np.inf) <= tol * max(1.0, np.linalg.norm(out, ord=np.inf)):
            break
    for _ in range(s):
        out = out @ out
    return out


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    """True when max |m_ij - conj(m_ji)| <= tol."""
    m = np.asarray(m)
    return bool(np.abs(m - dag(m)).max() <= tol)


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Args:
        m: Matrix, Hermitian within 1e-10.

    Returns:
        (w, v) with real eigenvalues w ascending and unitary v such that
        v @ diag(w) @ v.conj().T reconstructs m within 1e-10.

    Raises:
        ValueError: If m is not Hermitian within 1e-10.
    """
    m = np.asarray(m)
    if not is_hermitian(m, tol=1e-10):
        raise ValueError("eigh requires a Hermitian matrix (within 1e-10)")
    w, v = np.linalg.eigh((m + dag(m)) / 2)
    return w, v


def validate_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Check the density-matrix contract and return rho unchanged.

    Enforces Hermiticity within 1e-12, unit trace within 1e-10, and
    eigenvalues >= -1e-10.

    Raises:
        ValueError: On any violated invariant.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError(f"{name} contains non-finite entries")
    herm_err = np.abs(rho - dag(rho)).max()
    if herm_err > 1e-12:
        raise ValueError(f"{name} is not Hermitian: max deviation {herm_err:.3e}")
    tr_err = abs(np.trace(rho) - 1.0)
    if tr_err > 1e-10:
        raise ValueError(f"{name} trace deviates from 1 by {tr_err:.3e}")
    w = np.linalg.eigvalsh((rho + dag(rho)) / 2)
    if w.min() < -1e-10:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    return rho

"""Dense complex matrix helpers: Hermitian spectra, PSD roots, generator exponentials.

Everything here works on plain numpy arrays of modest dimension (N <= 16 in
practice).  Eigenvector gauge is fixed deterministically so repeated runs
produce identical decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian, NotPositive, ShapeMismatch

HERMITICITY_TOL = 1e-10
CLAMP_TOL = 1e-12


def max_abs(a) -> float:
    """Largest entrywise magnitude, i.e. the max norm."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"{name} must be a square 2-d array, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ShapeMismatch(f"{name} contains non-finite entries")
    return a


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ShapeMismatch(f"adjoint expects a 2-d array, got shape {a.shape}")
    return a.conj().T


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit shape check."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(_as_square(a)))


def det(a: np.ndarray) -> complex:
    return complex(np.linalg.det(_as_square(a)))


def orthonormal_defect(b: np.ndarray) -> float:
    """Max-norm deviation of B^dag B from the identity."""
    b = _as_square(b, "basis")
    return max_abs(b.conj().T @ b - np.eye(b.shape[0]))


def hermitize(a: np.ndarray) -> np.ndarray:
    """Average a matrix with its adjoint, removing float asymmetry."""
    a = _as_square(a)
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with gauge-fixed orthonormal eigenvectors.

    In each eigenvector column the largest-magnitude entry is real and
    nonnegative; ties go to the lowest row index.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _gauge_fix(vectors: np.ndarray) -> np.ndarray:
    fixed = np.array(vectors, dtype=complex, copy=True)
    for j in range(fixed.shape[1]):
        col = fixed[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        mag = abs(pivot)
        if mag > 0.0:
            col *= pivot.conjugate() / mag
            col[i] = mag  # kill residual imaginary dust on the pivot
    return fixed


def eig_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Args:
        a: square complex array, Hermitian within ``tol`` in max norm.
        tol: allowed deviation of A from its adjoint.

    Raises:
        NotHermitian: the symmetry check fails.
        NoConvergence: the underlying eigensolver does not converge.
    """
    a = _as_square(a)
    defect = max_abs(a - a.conj().T)
    if defect > tol:
        raise NotHermitian(f"max |A - A^dag| = {defect:.3e} exceeds tol {tol:.1e}")
    try:
        w, v = np.linalg.eigh(hermitize(a))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver failed: {exc}") from exc
    order = np.argsort(w, kind="stable")[::-1]
    w = np.ascontiguousarray(w[order])
    v = _gauge_fix(v[:, order])
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def psd_root(a: np.ndarray, l: int = 2, tol: float = CLAMP_TOL) -> np.ndarray:
    """Principal l-th root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-tol, 0) are clamped to zero before taking the root.

    Raises:
        NotPositive: an eigenvalue falls below -tol.
    """
    if int(l) != l or l < 1:
        raise ValueError(f"root order must be a positive integer, got {l!r}")
    l = int(l)
    dec = eig_hermitian(a)
    low = float(dec.eigenvalues.min()) if dec.dim else 0.0
    if low < -tol:
        raise NotPositive(f"eigenvalue {low:.3e} below -tol = {-tol:.1e}")
    w = np.clip(dec.eigenvalues, 0.0, None) ** (1.0 / l)
    v = dec.eigenvectors
    return hermitize((v * w) @ v.conj().T)


def expm_generator(h: np.ndarray, t: float = 1.0, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """exp(-i h t) for a Hermitian generator h, via its spectral decomposition."""
    dec = eig_hermitian(h, tol=tol)
    phases = np.exp(-1j * dec.eigenvalues * float(t))
    v = dec.eigenvectors
    return (v * phases) @ v.conj().T

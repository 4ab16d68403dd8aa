"""Density matrices with cached spectra, quasi-orthogonal partners, Bures fidelity.

A state rho_perp is quasi-orthogonal to rho when both share one orthonormal
eigenbasis and carry the same eigenvalue multiset, but each eigenvalue sits on
a different basis vector in the two states.  Cyclic families extend this to N
mutually quasi-orthogonal states by shifting the eigenvalue assignment one
basis vector per member.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import BadBasis, BadPairing, BadSpectrum, Degenerate

RANK_TOL = 1e-10
GAP_TOL = 1e-10
TRACE_TOL = 1e-10
BASIS_TOL = 1e-10


def check_basis(basis, dim: int | None = None) -> np.ndarray:
    """Validate that basis columns are orthonormal; returns a complex copy."""
    b = np.asarray(basis, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise BadBasis(f"basis must be a square column matrix, got shape {b.shape}")
    if dim is not None and b.shape[0] != dim:
        raise BadBasis(f"basis dimension {b.shape[0]} does not match {dim}")
    defect = algebra.orthonormal_defect(b)
    if defect > BASIS_TOL:
        raise BadBasis(f"basis columns not orthonormal: defect {defect:.3e}")
    return b.copy()


def _is_nondegenerate(eigenvalues: np.ndarray, rank_tol: float, gap_tol: float) -> bool:
    # Degeneracy is judged on the support only; zero eigenvalues never collide.
    nz = np.sort(eigenvalues[eigenvalues > rank_tol])
    if nz.size < 2:
        return True
    return bool(np.min(np.diff(nz)) > gap_tol)


@dataclass(frozen=True)
class DensityMatrix:
    """A trace-one PSD matrix plus its cached spectral data."""

    matrix: np.ndarray
    spectrum: algebra.SpectralDecomposition
    rank: int
    nondegenerate: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, m, rank_tol: float = RANK_TOL, gap_tol: float = GAP_TOL) -> "DensityMatrix":
        """Build from an explicit matrix, deriving the spectrum by diagonalization."""
        m = algebra.hermitize(np.asarray(m, dtype=complex))
        dec = algebra.eig_hermitian(m)
        if abs(float(dec.eigenvalues.sum()) - 1.0) > TRACE_TOL:
            raise BadSpectrum(f"trace {dec.eigenvalues.sum():.12f} is not 1")
        if float(dec.eigenvalues.min()) < -rank_tol:
            raise BadSpectrum(f"negative eigenvalue {dec.eigenvalues.min():.3e}")
        rank = int(np.sum(dec.eigenvalues > rank_tol))
        m.setflags(write=False)
        return cls(
            matrix=m,
            spectrum=dec,
            rank=rank,
            nondegenerate=_is_nondegenerate(dec.eigenvalues, rank_tol, gap_tol),
        )


def make_density(
    eigenvalues,
    basis,
    rank_tol: float = RANK_TOL,
    gap_tol: float = GAP_TOL,
) -> DensityMatrix:
    """Assemble sum_k lambda_k |psi_k><psi_k| from a spectrum and basis columns.

    Args:
        eigenvalues: nonnegative reals summing to one; entry k pairs with column k.
        basis: orthonormal columns.

    Raises:
        BadSpectrum: negative or non-normalized eigenvalues.
        BadBasis: columns not orthonormal.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise BadSpectrum(f"eigenvalues must be a 1-d sequence, got shape {lam.shape}")
    if float(lam.min()) < -1e-12:
        raise BadSpectrum(f"negative eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    total = float(lam.sum())
    if abs(total - 1.0) > TRACE_TOL:
        raise BadSpectrum(f"eigenvalues sum to {total:.12f}, not 1")
    b = check_basis(basis, dim=lam.size)

    matrix = algebra.hermitize((b * lam) @ b.conj().T)
    # Canonical spectrum comes from the inputs directly, not from re-diagonalizing,
    # so nearly equal eigenvalues cannot mix their eigenvectors.
    order = np.argsort(lam, kind="stable")[::-1]
    w = np.ascontiguousarray(lam[order])
    v = algebra._gauge_fix(b[:, order])
    matrix.setflags(write=False)
    w.setflags(write=False)
    v.setflags(write=False)
    return DensityMatrix(
        matrix=matrix,
        spectrum=algebra.SpectralDecomposition(eigenvalues=w, eigenvectors=v),
        rank=int(np.sum(w > rank_tol)),
        nondegenerate=_is_nondegenerate(w, rank_tol, gap_tol),
    )


def _check_pairing(pairing, n: int) -> np.ndarray:
    p = np.asarray(pairing, dtype=int)
    if p.shape != (n,) or sorted(p.tolist()) != list(range(n)):
        raise BadPairing(f"pairing must be a permutation of 0..{n - 1}, got {pairing!r}")
    if np.any(p == np.arange(n)):
        raise BadPairing("pairing has a fixed point; every index must move")
    return p


def quasi_complement(rho: DensityMatrix, pairing=None) -> DensityMatrix:
    """Quasi-orthogonal partner of rho under a fixed-point-free index pairing.

    The pairing permutes the positions of rho's descending-sorted eigenvalues
    within its own eigenbasis; the default is the cyclic shift by one.
    """
    if not rho.nondegenerate:
        raise Degenerate("quasi-orthogonal complement needs a nondegenerate spectrum")
    n = rho.dim
    if n < 2:
        raise BadPairing("no fixed-point-free pairing exists in dimension 1")
    if pairing is None:
        pairing = (np.arange(n) + 1) % n
    p = _check_pairing(pairing, n)
    lam = rho.spectrum.eigenvalues
    mu = np.empty(n, dtype=float)
    mu[p] = lam
    return make_density(mu, rho.spectrum.eigenvectors)


@dataclass(frozen=True)
class QuasiOrthogonalFamily:
    """N mutually quasi-orthogonal states over one shared basis.

    Member j (0-based) assigns eigenvalue lambda_k to basis column (k + j) mod N,
    so member 0 is the reference state and each later member shifts the whole
    assignment by one more column.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    members: tuple[DensityMatrix, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def shift_table(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    def assigned_eigenvalues(self, member: int) -> np.ndarray:
        """Eigenvalue carried by each basis column in the given member."""
        n = self.size
        cols = (np.arange(n) - member) % n
        return self.eigenvalues[cols]

    def select(self, indices) -> tuple[DensityMatrix, ...]:
        return tuple(self.members[i] for i in indices)


def cyclic_family(eigenvalues, basis) -> QuasiOrthogonalFamily:
    """Build the full cyclic family over the given spectrum and basis.

    Raises:
        Degenerate: two nonzero eigenvalues coincide, so the members would
            not be mutually quasi-orthogonal.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    members = []
    n = lam.size
    for j in range(n):
        mu = np.empty(n, dtype=float)
        mu[(np.arange(n) + j) % n] = lam
        members.append(make_density(mu, basis))
    if not members[0].nondegenerate:
        raise Degenerate("cyclic family needs distinct nonzero eigenvalues")
    lam = np.clip(lam, 0.0, None)
    lam.setflags(write=False)
    b = check_basis(basis, dim=n)
    b.setflags(write=False)
    return QuasiOrthogonalFamily(eigenvalues=lam, basis=b, members=tuple(members))


def bures_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Bures fidelity [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2, a real in [0, 1]."""
    if rho.dim != sigma.dim:
        raise BadBasis(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    s = algebra.psd_root(rho.matrix, 2)
    inner = algebra.hermitize(s @ sigma.matrix @ s)
    w = algebra.eig_hermitian(inner).eigenvalues
    val = float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)
    return min(max(val, 0.0), 1.0)

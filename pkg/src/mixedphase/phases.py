"""Phase functionals of transported states.

The normalized phase factor of a complex trace z is z/|z| whenever |z|
exceeds a visibility floor; below it the phase is Undefined, which is a
value here, not an exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .errors import BasisMismatch, Degenerate, NotQuasiOrthogonal, ShapeMismatch
from .states import DensityMatrix

VISIBILITY_FLOOR = 1e-8
QO_TOL = 1e-8


@dataclass(frozen=True)
class PhaseResult:
    """A complex trace plus its normalized phase, or Undefined below the floor."""

    trace_value: complex
    magnitude: float
    defined: bool
    phase_factor: complex | None
    phase_angle: float | None
    tol_used: float
    meta: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "trace": [self.trace_value.real, self.trace_value.imag],
            "magnitude": self.magnitude,
            "defined": self.defined,
            "phase_angle": self.phase_angle,
            "tol": self.tol_used,
            "meta": dict(self.meta),
        }


def phase_factor(z: complex, tol: float = VISIBILITY_FLOOR, meta: dict | None = None) -> PhaseResult:
    """Normalize z to the unit circle, or mark the phase Undefined when |z| <= tol."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    z = complex(z)
    mag = abs(z)
    if mag > tol:
        factor = z / mag
        angle = float(np.angle(factor))
    else:
        factor = None
        angle = None
    return PhaseResult(
        trace_value=z,
        magnitude=mag,
        defined=factor is not None,
        phase_factor=factor,
        phase_angle=angle,
        tol_used=float(tol),
        meta=meta or {},
    )


def _check_square_dim(u: np.ndarray, dim: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim):
        raise ShapeMismatch(f"operator shape {u.shape} does not match dimension {dim}")
    return u


def sigma(j: int, k: int, upar, basis, tol: float = VISIBILITY_FLOOR) -> PhaseResult:
    """Relative phase factor of <psi_j| U_par |psi_k> (0-based indices)."""
    b = np.asarray(basis, dtype=complex)
    n = b.shape[0]
    u = _check_square_dim(upar, n)
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"indices ({j}, {k}) out of range for dimension {n}")
    element = complex(b[:, j].conj() @ u @ b[:, k])
    return phase_factor(element, tol, meta={"indices": (j, k)})


def gamma_pure(indices, upar, basis, tol: float = VISIBILITY_FLOOR) -> PhaseResult:
    """Cyclic product sigma(j1,j2) sigma(j2,j3) ... sigma(jl,j1) for pure states.

    trace_value holds the product of the raw matrix elements; the result is
    Undefined as soon as any single factor is Undefined.
    """
    idx = [int(i) for i in indices]
    if len(idx) < 1:
        raise ValueError("need at least one index")
    if len(set(idx)) != len(idx):
        raise ValueError(f"indices must be distinct, got {idx}")
    factors = [sigma(idx[i], idx[(i + 1) % len(idx)], upar, basis, tol) for i in range(len(idx))]
    raw = complex(np.prod([f.trace_value for f in factors]))
    if all(f.defined for f in factors):
        prod = complex(np.prod([f.phase_factor for f in factors]))
        prod /= abs(prod)
        return PhaseResult(
            trace_value=raw,
            magnitude=abs(raw),
            defined=True,
            phase_factor=prod,
            phase_angle=float(np.angle(prod)),
            tol_used=float(tol),
            meta={"indices": tuple(idx), "order": len(idx)},
        )
    return PhaseResult(
        trace_value=raw,
        magnitude=abs(raw),
        defined=False,
        phase_factor=None,
        phase_angle=None,
        tol_used=float(tol),
        meta={"indices": tuple(idx), "order": len(idx)},
    )


def gamma_diag(rho: DensityMatrix, upar, tol: float = VISIBILITY_FLOOR,
               allow_degenerate: bool = False) -> PhaseResult:
    """Phase of tr(U_par rho) for a nondegenerate mixed state.

    `allow_degenerate` exists solely for the documented maximally mixed
    comparison and is recorded in the result metadata.
    """
    u = _check_square_dim(upar, rho.dim)
    if not rho.nondegenerate and not allow_degenerate:
        raise Degenerate("gamma_diag needs a nondegenerate spectrum")
    tr = complex(np.trace(u @ rho.matrix))
    meta = {"kind": "diag"}
    if allow_degenerate:
        meta["degeneracy_override"] = True
    return phase_factor(tr, tol, meta=meta)


def _same_eigenvalue_overlaps(rho: DensityMatrix, rho_perp: DensityMatrix) -> np.ndarray:
    v1 = rho.spectrum.eigenvectors
    v2 = rho_perp.spectrum.eigenvectors
    return np.abs(np.einsum("ik,ik->k", v1.conj(), v2))


def check_quasi_orthogonal(rho: DensityMatrix, rho_perp: DensityMatrix, tol: float = QO_TOL) -> None:
    """Raise NotQuasiOrthogonal unless the pair shares a basis with permuted spectra."""
    if rho.dim != rho_perp.dim:
        raise ShapeMismatch(f"dimension mismatch: {rho.dim} vs {rho_perp.dim}")
    lam1 = rho.spectrum.eigenvalues
    lam2 = rho_perp.spectrum.eigenvalues
    if algebra.max_abs(lam1 - lam2) > tol:
        raise NotQuasiOrthogonal("eigenvalue multisets differ")
    comm = rho.matrix @ rho_perp.matrix - rho_perp.matrix @ rho.matrix
    if algebra.max_abs(comm) > tol:
        raise NotQuasiOrthogonal("states do not commute, so they share no eigenbasis")
    overlaps = _same_eigenvalue_overlaps(rho, rho_perp)
    support = lam1 > 1e-10
    if np.any(overlaps[support] > 1e-6):
        worst = float(overlaps[support].max())
        raise NotQuasiOrthogonal(
            f"an eigenvalue keeps its eigenvector (overlap {worst:.3e}); pairing must move every index"
        )


def gamma_offdiag(rho: DensityMatrix, rho_perp: DensityMatrix, upar,
                  tol: float = VISIBILITY_FLOOR, allow_degenerate: bool = False) -> PhaseResult:
    """Phase of tr(U_par sqrt(rho) U_par sqrt(rho_perp)) for a quasi-orthogonal pair.

    With `allow_degenerate` the degeneracy and quasi-orthogonality checks are
    both skipped (they are meaningless once the eigenbasis is non-unique);
    the override is flagged in the metadata.
    """
    u = _check_square_dim(upar, rho.dim)
    meta = {"kind": "offdiag"}
    if allow_degenerate:
        meta["degeneracy_override"] = True
    else:
        if not (rho.nondegenerate and rho_perp.nondegenerate):
            raise Degenerate("gamma_offdiag needs nondegenerate spectra")
        check_quasi_orthogonal(rho, rho_perp)
    s1 = algebra.psd_root(rho.matrix, 2)
    s2 = algebra.psd_root(rho_perp.matrix, 2)
    tr = complex(np.trace(u @ s1 @ u @ s2))
    return phase_factor(tr, tol, meta=meta)


def gamma_l(members, upar, tol: float = VISIBILITY_FLOOR) -> PhaseResult:
    """Phase of tr(U_par rho_j1^(1/l) U_par rho_j2^(1/l) ... ) with l = len(members).

    Members must all commute (one shared eigenbasis); with a single member
    this reduces to gamma_diag, with two to gamma_offdiag.
    """
    members = tuple(members)
    l = len(members)
    if l < 1:
        raise ValueError("need at least one member")
    dim = members[0].dim
    u = _check_square_dim(upar, dim)
    for m in members:
        if m.dim != dim:
            raise ShapeMismatch("members differ in dimension")
        if not m.nondegenerate:
            raise Degenerate("gamma_l members must be nondegenerate")
    for i in range(l):
        for j in range(i + 1, l):
            comm = members[i].matrix @ members[j].matrix - members[j].matrix @ members[i].matrix
            if algebra.max_abs(comm) > QO_TOL:
                raise BasisMismatch(f"members {i} and {j} do not share an eigenbasis")
    prod = np.eye(dim, dtype=complex)
    for m in members:
        prod = prod @ u @ algebra.psd_root(m.matrix, l)
    tr = complex(np.trace(prod))
    return phase_factor(tr, tol, meta={"kind": "cycle", "order": l})

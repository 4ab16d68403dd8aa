"""Cycle/diagonal decomposition of transport operators that permute basis rays.

When U_par maps every basis ray onto a basis ray, the cycle trace term comes
from its single nontrivial cycle block and the diagonal term from the fixed
rays, and the two add up to the full l-cycle trace.  Cycle labels are ordered
so that U_par sends label c_j to label c_(j-1), with the first label mapped to
the last; that ordering matches the closed-form tables for the full
permutation while leaving the trace values themselves label-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import BasisMismatch, MultipleCycles, ShapeMismatch
from .states import QuasiOrthogonalFamily, check_basis

PERMUTATION_TOL = 1e-8


@dataclass(frozen=True)
class DecompositionReport:
    """Permutation structure of U_par over a basis: one cycle block plus fixed rays."""

    is_permuting: bool
    m: int
    cycle_labels: tuple[int, ...]
    diag_labels: tuple[int, ...]
    u_p: np.ndarray | None
    u_d_entries: np.ndarray | None
    basis: np.ndarray
    matrix_in_basis: np.ndarray
    off_block_residual: float

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def reassemble(self) -> np.ndarray:
        """Rebuild the basis-frame matrix from the blocks alone."""
        if not self.is_permuting:
            raise ValueError("report has no blocks; operator was not permuting")
        n = self.dim
        out = np.zeros((n, n), dtype=complex)
        cl = list(self.cycle_labels)
        for a, ra in enumerate(cl):
            for b, cb in enumerate(cl):
                out[ra, cb] = self.u_p[a, b]
        for entry, k in zip(self.u_d_entries, self.diag_labels):
            out[k, k] = entry
        return out


def decompose(upar, basis, tol: float = PERMUTATION_TOL) -> DecompositionReport:
    """Detect whether U_par permutes the basis rays and split it into blocks.

    A column counts as mapped to a single ray when its dominant overlap
    magnitude exceeds 1 - tol.  Exactly one nontrivial cycle is allowed.

    Raises:
        MultipleCycles: the permutation contains two or more nontrivial cycles.
    """
    b = check_basis(basis)
    n = b.shape[0]
    u = np.asarray(upar, dtype=complex)
    if u.shape != (n, n):
        raise ShapeMismatch(f"operator shape {u.shape} does not match basis dimension {n}")
    m_frame = b.conj().T @ u @ b

    targets = np.argmax(np.abs(m_frame), axis=0)
    dominant = np.abs(m_frame[targets, np.arange(n)])
    permuting = bool(np.all(dominant >= 1.0 - tol)) and len(set(targets.tolist())) == n
    if not permuting:
        return DecompositionReport(
            is_permuting=False,
            m=0,
            cycle_labels=(),
            diag_labels=(),
            u_p=None,
            u_d_entries=None,
            basis=b,
            matrix_in_basis=m_frame,
            off_block_residual=float("nan"),
        )

    perm = {int(col): int(targets[col]) for col in range(n)}
    seen = set()
    cycles = []
    for start in range(n):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        cycles.append(cyc)
    nontrivial = [c for c in cycles if len(c) > 1]
    if len(nontrivial) > 1:
        raise MultipleCycles(f"found {len(nontrivial)} nontrivial cycles: {nontrivial}")

    if nontrivial:
        walk = nontrivial[0]  # walk[i+1] = perm(walk[i]), starting at the smallest index
        # Reorder so the operator maps label c_j to c_(j-1): keep the start,
        # then append the forward walk reversed.
        cycle_labels = tuple([walk[0]] + walk[:0:-1])
    else:
        cycle_labels = ()
    m = len(cycle_labels)
    diag_labels = tuple(k for k in range(n) if k not in cycle_labels)

    if m:
        rows = np.asarray(cycle_labels)
        u_p = m_frame[np.ix_(rows, rows)]
    else:
        u_p = np.zeros((0, 0), dtype=complex)
    u_d = m_frame[diag_labels, diag_labels] if diag_labels else np.zeros(0, dtype=complex)

    mask = np.ones((n, n), dtype=bool)
    if m:
        mask[np.ix_(cycle_labels, cycle_labels)] = False
    for k in diag_labels:
        mask[k, k] = False
    residual = algebra.max_abs(m_frame[mask]) if mask.any() else 0.0

    return DecompositionReport(
        is_permuting=True,
        m=m,
        cycle_labels=cycle_labels,
        diag_labels=diag_labels,
        u_p=u_p,
        u_d_entries=u_d,
        basis=b,
        matrix_in_basis=m_frame,
        off_block_residual=float(residual),
    )


def _check_family(report: DecompositionReport, family: QuasiOrthogonalFamily) -> None:
    if family.dim != report.dim:
        raise BasisMismatch(f"family dimension {family.dim} differs from report {report.dim}")
    if algebra.max_abs(family.basis - report.basis) > 1e-10:
        raise BasisMismatch("family and report were built over different bases")


def _member_roots(family: QuasiOrthogonalFamily, indices, l: int) -> list[np.ndarray]:
    roots = []
    for j in indices:
        assigned = family.assigned_eigenvalues(int(j))
        roots.append(np.clip(assigned, 0.0, None) ** (1.0 / l))
    return roots


def p_term(report: DecompositionReport, family: QuasiOrthogonalFamily, indices) -> complex:
    """Cycle contribution to the l-cycle trace, l = len(indices).

    Identically zero unless the cycle length m divides l; that selection rule
    is structural, so the zero is returned exactly.
    """
    if not report.is_permuting:
        raise ValueError("p_term needs a permuting operator report")
    _check_family(report, family)
    indices = [int(j) for j in indices]
    l = len(indices)
    if l < 1:
        raise ValueError("need at least one index")
    if report.m == 0 or l % report.m != 0:
        return 0.0 + 0.0j
    rows = list(report.cycle_labels)
    prod = np.eye(report.m, dtype=complex)
    for root in _member_roots(family, indices, l):
        prod = prod @ report.u_p @ np.diag(root[rows])
    return complex(np.trace(prod))


def d_term(report: DecompositionReport, family: QuasiOrthogonalFamily, indices) -> complex:
    """Fixed-ray contribution: sum_k (U_kk)^l * prod_j (lambda assigned to k)^(1/l)."""
    if not report.is_permuting:
        raise ValueError("d_term needs a permuting operator report")
    _check_family(report, family)
    indices = [int(j) for j in indices]
    l = len(indices)
    if l < 1:
        raise ValueError("need at least one index")
    if not report.diag_labels:
        return 0.0 + 0.0j
    cols = list(report.diag_labels)
    total = 0.0 + 0.0j
    for pos, k in enumerate(cols):
        weight = 1.0
        for root in _member_roots(family, indices, l):
            weight *= root[k]
        total += report.u_d_entries[pos] ** l * weight
    return complex(total)


def split_identity_check(upar, family: QuasiOrthogonalFamily, indices) -> float:
    """|full l-cycle trace - (p_term + d_term)| for a permuting operator."""
    report = decompose(upar, family.basis)
    if not report.is_permuting:
        raise ValueError("operator does not permute the family basis rays")
    indices = [int(j) for j in indices]
    l = len(indices)
    u = np.asarray(upar, dtype=complex)
    prod = np.eye(family.dim, dtype=complex)
    for j in indices:
        root_diag = np.clip(family.assigned_eigenvalues(j), 0.0, None) ** (1.0 / l)
        rooted = (family.basis * root_diag) @ family.basis.conj().T
        prod = prod @ u @ rooted
    full = complex(np.trace(prod))
    split = p_term(report, family, indices) + d_term(report, family, indices)
    return abs(full - split)

"""Two-photon interferometry that reads out the two-cycle trace of a qubit pair.

A polarization-entangled pair carries a tunable-purity marginal. One arm applies
a rotation, the other its transpose, and the long-long amplitude is interfered
against the flipped reference with a scanned phase chi. The coincidence fringe
1 + |T| cos(chi - arg T) then exposes the same trace T the density-matrix
pipeline computes, so the fitted shift and visibility double-check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import phases, states
from .errors import InsufficientSamples, RangeError, ShapeMismatch

NORM_TOL = 1e-10
MIN_POINTS = 8


@dataclass(frozen=True)
class TwoPhotonState:
    """Pure state of two polarization qubits, amplitudes ordered hh, hv, vh, vv."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise ShapeMismatch(f"expected 4 amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps.view(float))):
            raise ShapeMismatch("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise RangeError(f"state norm {norm!r} is not 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def reduced_system(self) -> states.DensityMatrix:
        """Marginal of the first photon."""
        m = self.amplitudes.reshape(2, 2)
        return states.DensityMatrix.from_matrix(m @ m.conj().T)

    def reduced_idler(self) -> states.DensityMatrix:
        """Marginal of the second photon."""
        m = self.amplitudes.reshape(2, 2)
        return states.DensityMatrix.from_matrix(m.T @ m.conj())


def purify(r: float) -> tuple[TwoPhotonState, TwoPhotonState]:
    """Entangled pair whose marginals have eigenvalues (1 +/- r)/2, plus its flip.

    The second state is the first with both polarizations swapped; its marginal
    is the quasi-orthogonal partner of the first one's.
    """
    if not (0.0 <= r <= 1.0):
        raise RangeError(f"r must lie in [0, 1], got {r!r}")
    hi = math.sqrt((1.0 + r) / 2.0)
    lo = math.sqrt((1.0 - r) / 2.0)
    psi = TwoPhotonState(np.array([hi, 0.0, 0.0, lo], dtype=complex))
    flipped = TwoPhotonState(np.array([lo, 0.0, 0.0, hi], dtype=complex))
    return psi, flipped


def arm_unitaries(beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rotation by beta in the h/v plane for the system arm, its transpose for the idler.

    Both are parallel transporting for any diagonal marginal: the generator has
    no diagonal part in the h/v basis.
    """
    if not (0.0 <= beta <= math.pi):
        raise RangeError(f"beta must lie in [0, pi], got {beta!r}")
    c, s = math.cos(beta), math.sin(beta)
    u = np.array([[c, -s], [s, c]], dtype=complex)
    return u, u.T.copy()


def coincidence_intensity(r: float, beta: float, chi: float) -> float:
    """Coincidence rate at analyzer phase chi, normalized to oscillate about 1."""
    psi, flipped = purify(r)
    u, v = arm_unitaries(beta)
    out = np.exp(1j * chi) * flipped.amplitudes + np.kron(u, v) @ psi.amplitudes
    return 0.5 * float(np.vdot(out, out).real)


@dataclass(frozen=True)
class FringeScan:
    """A sampled fringe and its cosine fit c0 * (1 + V cos(chi - shift))."""

    chi_values: np.ndarray
    intensities: np.ndarray
    offset: float
    visibility: float
    shift: float
    residual_rms: float

    def __post_init__(self):
        for name in ("chi_values", "intensities"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def fitted(self) -> np.ndarray:
        """Fit evaluated on the scan grid."""
        return self.offset * (1.0 + self.visibility * np.cos(self.chi_values - self.shift))


def fringe_fit(chi_values, intensities) -> FringeScan:
    """Least-squares cosine fit of a fringe scan.

    Needs at least 8 points spanning (almost) a full turn, otherwise the three
    fit parameters are poorly conditioned and the shift is not trustworthy.
    """
    chi = np.asarray(chi_values, dtype=float)
    data = np.asarray(intensities, dtype=float)
    if chi.ndim != 1 or chi.shape != data.shape:
        raise ShapeMismatch(
            f"scan arrays must be matching 1-d, got {chi.shape} and {data.shape}"
        )
    n = chi.size
    if n < MIN_POINTS:
        raise InsufficientSamples(f"need at least {MIN_POINTS} points, got {n}")
    span = float(chi.max() - chi.min())
    needed = 2.0 * math.pi * (1.0 - 1.0 / n) - 1e-9
    if span < needed:
        raise InsufficientSamples(
            f"scan spans {span:.6f} rad, need at least {needed:.6f}"
        )
    design = np.column_stack([np.ones(n), np.cos(chi), np.sin(chi)])
    (c0, p, q), *_ = np.linalg.lstsq(design, data, rcond=None)
    amplitude = math.hypot(p, q)
    shift = math.atan2(q, p)
    if shift <= -math.pi:
        shift += 2.0 * math.pi
    visibility = 0.0 if c0 <= 0.0 else min(amplitude / c0, 1.0)
    residual = data - design @ np.array([c0, p, q])
    rms = float(np.sqrt(np.mean(residual * residual)))
    return FringeScan(chi, data, float(c0), float(visibility), float(shift), rms)


def simulate_fringe(
    r: float,
    beta: float,
    n_chi: int = 32,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> FringeScan:
    """Scan chi over a full turn, optionally with Poisson counting noise.

    ``shots`` is the mean photon-pair count per bin at unit intensity; the
    recorded value is counts/shots so the fit stays in normalized units. The
    grid includes both ends, so the scan spans a full period.
    """
    chi = np.linspace(0.0, 2.0 * math.pi, n_chi)
    ideal = np.array([coincidence_intensity(r, beta, x) for x in chi])
    if shots is None:
        return fringe_fit(chi, ideal)
    if shots < 1:
        raise RangeError(f"shots must be a positive count, got {shots!r}")
    if rng is None:
        rng = np.random.default_rng()
    counts = rng.poisson(np.clip(ideal, 0.0, None) * shots)
    return fringe_fit(chi, counts / float(shots))


def predicted_trace(r: float, beta: float, tol: float = phases.VISIBILITY_FLOOR):
    """Two-cycle trace of the marginal pair under the system-arm rotation.

    This is the quantity the fringe shift and visibility measure. At r = 0 the
    marginal is degenerate and is paired with itself under the override.
    """
    if not (0.0 <= r <= 1.0):
        raise RangeError(f"r must lie in [0, 1], got {r!r}")
    rho = states.make_density([(1.0 + r) / 2.0, (1.0 - r) / 2.0], np.eye(2))
    u, _ = arm_unitaries(beta)
    if rho.nondegenerate:
        partner = states.quasi_complement(rho)
        return phases.gamma_offdiag(rho, partner, u, tol=tol)
    return phases.gamma_offdiag(rho, rho, u, tol=tol, allow_degenerate=True)


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """Independent generators for n trials, split from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]

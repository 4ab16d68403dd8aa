"""Piecewise-constant unitary paths and their parallel-transport gauge.

A path is a list of segments, each evolving under exp(-i H t) for a fixed
Hermitian generator H.  ``parallelize`` multiplies every sample by a diagonal
phase correction in a chosen eigenbasis so that each transported eigenstate
accumulates no local phase; the correction integral uses the trapezoid rule
over the stored samples.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import algebra
from .errors import AntipodalEndpoints, BadBasis, NotHermitian, ShapeMismatch, ZeroOverlapStep

DEFAULT_STEPS = 200
OVERLAP_FLOOR = 1e-12
ANTIPODAL_TOL = 1e-9

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class PathSegment:
    """One constant-generator stretch: evolve under exp(-i*generator*t) for `duration`."""

    generator: np.ndarray
    duration: float
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        g = algebra._as_square(self.generator, "generator")
        defect = algebra.max_abs(g - g.conj().T)
        if defect > algebra.HERMITICITY_TOL:
            raise NotHermitian(f"segment generator defect {defect:.3e}")
        if not (self.duration >= 0.0 and np.isfinite(self.duration)):
            raise ValueError(f"duration must be finite and >= 0, got {self.duration!r}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "steps", int(self.steps))

    @classmethod
    def about_axis(cls, axis, angle: float, steps: int = DEFAULT_STEPS) -> "PathSegment":
        """Qubit rotation by `angle` about a Bloch axis; generator is (axis . sigma)/2."""
        v = np.asarray(axis, dtype=float)
        norm = float(np.linalg.norm(v))
        if v.shape != (3,) or norm < 1e-12:
            raise ValueError(f"axis must be a nonzero 3-vector, got {axis!r}")
        v = v / norm
        if angle < 0:
            v, angle = -v, -angle
        gen = 0.5 * (v[0] * _PAULI["x"] + v[1] * _PAULI["y"] + v[2] * _PAULI["z"])
        return cls(generator=gen, duration=float(angle), steps=steps)


@dataclass(frozen=True)
class UnitaryPath:
    """Sampled unitaries U(t_i) along a path, with optional parallel gauge."""

    segments: tuple[PathSegment, ...]
    times: np.ndarray
    samples: np.ndarray
    parallel: np.ndarray | None = None
    basis: np.ndarray | None = None
    pt_residual: float | None = None

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def final(self) -> np.ndarray:
        return self.samples[-1]

    @property
    def final_parallel(self) -> np.ndarray:
        if self.parallel is None:
            raise ValueError("path has no parallel gauge; call parallelize first")
        return self.parallel[-1]


def evolve(segments) -> UnitaryPath:
    """Compose the segment evolutions, keeping every intermediate sample.

    Sample i+1 is exp(-i H dt) applied to sample i, so the result holds
    sum(steps) + 1 unitaries starting from the identity.
    """
    segs = tuple(segments)
    if not segs:
        raise ValueError("a path needs at least one segment")
    n = segs[0].generator.shape[0]
    for seg in segs:
        if seg.generator.shape[0] != n:
            raise ShapeMismatch("all segment generators must share one dimension")
    samples = [np.eye(n, dtype=complex)]
    times = [0.0]
    t = 0.0
    for seg in segs:
        dt = seg.duration / seg.steps
        step = algebra.expm_generator(seg.generator, dt)
        u = samples[-1]
        for _ in range(seg.steps):
            u = step @ u
            t += dt
            samples.append(u)
            times.append(t)
    samples = np.asarray(samples)
    times = np.asarray(times)
    samples.setflags(write=False)
    times.setflags(write=False)
    return UnitaryPath(segments=segs, times=times, samples=samples)


def parallelize(path: UnitaryPath, basis, overlap_floor: float = OVERLAP_FLOOR) -> UnitaryPath:
    """Return the path in the parallel-transport gauge for the given eigenbasis.

    Each sample is multiplied by C(t) = sum_k exp(i phi_k(t)) |psi_k><psi_k|,
    where phi_k integrates <psi_k| U^dag H U |psi_k> with the trapezoid rule
    segment by segment.  The per-step phase residual of the result is recorded
    on the returned path.

    Raises:
        ZeroOverlapStep: some transported overlap magnitude drops below
            `overlap_floor` within a single step.
    """
    b = np.asarray(basis, dtype=complex)
    if b.shape != (path.dim, path.dim):
        raise BadBasis(f"basis shape {b.shape} does not match path dimension {path.dim}")
    if algebra.orthonormal_defect(b) > 1e-10:
        raise BadBasis("basis columns are not orthonormal")

    n_samples = path.samples.shape[0]
    phi = np.zeros((n_samples, path.dim))
    start = 0
    for seg in path.segments:
        stop = start + seg.steps
        us = path.samples[start : stop + 1]
        w = us @ b
        hw = np.einsum("ij,sjk->sik", seg.generator, w)
        g = np.einsum("sik,sik->sk", w.conj(), hw).real
        dt = seg.duration / seg.steps
        incr = 0.5 * dt * (g[:-1] + g[1:])
        phi[start + 1 : stop + 1] = phi[start] + np.cumsum(incr, axis=0)
        start = stop

    correction = np.einsum("ij,sj,kj->sik", b, np.exp(1j * phi), b.conj())
    upar = path.samples @ correction

    transported = upar @ b
    overlaps = np.einsum("sik,sik->sk", transported[:-1].conj(), transported[1:])
    smallest = float(np.abs(overlaps).min())
    if smallest < overlap_floor:
        raise ZeroOverlapStep(
            f"step overlap {smallest:.3e} below floor {overlap_floor:.1e}; refine the path"
        )
    residual = float(np.max(np.abs(np.angle(overlaps))))

    b = b.copy()
    b.setflags(write=False)
    upar.setflags(write=False)
    return replace(path, parallel=upar, basis=b, pt_residual=residual)


def _endpoint_series(path: UnitaryPath, basis) -> np.ndarray:
    if path.parallel is None:
        raise ValueError("path has no parallel gauge; call parallelize first")
    if basis is None:
        b = path.basis
    else:
        b = np.asarray(basis, dtype=complex)
        if path.basis is not None and algebra.max_abs(b - path.basis) > 1e-10:
            raise BadBasis("basis differs from the one used to parallelize this path")
    first = b[:, 0]
    moving = path.parallel @ first
    return np.einsum("i,si->s", first.conj(), moving)


def visibility(path: UnitaryPath, basis=None) -> float:
    """|<psi_1| U_par(T) |psi_1>|, clipped into [0, 1]."""
    f = _endpoint_series(path, basis)
    return min(max(float(np.abs(f[-1])), 0.0), 1.0)


def solid_angle(path: UnitaryPath, basis=None, antipodal_tol: float = ANTIPODAL_TOL) -> float:
    """Geodesically closed solid angle swept by the first transported eigenstate.

    Accumulates the phase of <psi_1|U_par(t)|psi_1> stepwise, so windings that
    a single principal-branch evaluation would alias are kept, then reduces
    into (-2*pi, 2*pi].  Positive values correspond to counterclockwise
    circuits seen from outside the sphere; a qubit-only notion.

    Raises:
        AntipodalEndpoints: endpoint visibility below `antipodal_tol`.
    """
    if path.dim != 2:
        raise ShapeMismatch("solid angle is defined for qubit paths only")
    f = _endpoint_series(path, basis)
    eta = float(np.abs(f[-1]))
    if eta < antipodal_tol:
        raise AntipodalEndpoints(f"endpoint visibility {eta:.3e}; geodesic closure undefined")
    increments = np.angle(f[1:] * f[:-1].conj())
    omega = -2.0 * float(increments.sum())
    reduced = (omega + 2.0 * np.pi) % (4.0 * np.pi)
    if reduced == 0.0:
        reduced = 4.0 * np.pi
    return reduced - 2.0 * np.pi


def random_geodesic_path(rng, n_segments: int | None = None, steps: int = DEFAULT_STEPS,
                         angle_low: float = 0.1, angle_high: float = np.pi - 0.1) -> list[PathSegment]:
    """Sample 1-3 great-circle segments starting from the +z pole.

    Each rotation axis is drawn perpendicular to the current Bloch vector, so
    every segment is a geodesic arc and contributes no dynamical phase to the
    transported pole states.
    """
    if n_segments is None:
        n_segments = int(rng.integers(1, 4))
    bloch = np.array([0.0, 0.0, 1.0])
    segments = []
    for _ in range(n_segments):
        while True:
            probe = rng.normal(size=3)
            axis = np.cross(bloch, probe)
            norm = np.linalg.norm(axis)
            if norm > 1e-6:
                axis = axis / norm
                break
        angle = float(rng.uniform(angle_low, angle_high))
        segments.append(PathSegment.about_axis(axis, angle, steps=steps))
        bloch = bloch * np.cos(angle) + np.cross(axis, bloch) * np.sin(angle)
    return segments

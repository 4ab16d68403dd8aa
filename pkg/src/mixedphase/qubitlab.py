"""Qubit closed forms: cycle traces, nodal surfaces, the maximally mixed comparison.

For a qubit with eigenvalues (1 +/- r)/2 transported with visibility eta and
solid angle Omega, the two-cycle trace is eta^2*sqrt(1-r^2)*cos(Omega)-(1-eta^2)
and the one-cycle trace is eta*(cos(Omega/2) - i*r*sin(Omega/2)), whose phase
continues the arctan of r*tan(Omega/2) across the branch point at Omega = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import algebra, phases, states
from .errors import RangeError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QubitConfig:
    """Purity r, endpoint visibility eta, and solid angle omega of a qubit path."""

    r: float
    eta: float
    omega: float

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0):
            raise RangeError(f"r must lie in (0, 1], got {self.r!r}")
        if not (0.0 <= self.eta <= 1.0):
            raise RangeError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not (-TWO_PI < self.omega <= TWO_PI):
            raise RangeError(f"omega must lie in (-2*pi, 2*pi], got {self.omega!r}")

    @property
    def fb(self) -> float:
        """Bures fidelity between the state and its quasi-orthogonal partner."""
        return 1.0 - self.r * self.r


def config_from_unitary(upar_final, r: float, basis=None) -> QubitConfig:
    """Extract (eta, omega) from the endpoint of a parallel-transported qubit path."""
    u = np.asarray(upar_final, dtype=complex)
    if basis is None:
        element = complex(u[0, 0])
    else:
        b = np.asarray(basis, dtype=complex)
        element = complex(b[:, 0].conj() @ u @ b[:, 0])
    eta = min(abs(element), 1.0)
    if eta > 1e-12:
        omega = -2.0 * float(np.angle(element))
        if omega <= -TWO_PI:
            omega += 2.0 * TWO_PI
    else:
        omega = 0.0
    return QubitConfig(r=r, eta=eta, omega=omega)


def offdiag_trace_expr(fb: float, omega: float, eta2: float) -> float:
    """Two-cycle trace as a raw expression in eta^2; accepts eta^2 outside [0, 1]."""
    return eta2 * math.sqrt(fb) * math.cos(omega) - (1.0 - eta2)


def offdiag_trace_closed(cfg: QubitConfig) -> float:
    """Closed-form two-cycle trace; real for any parallel-transported qubit path."""
    return offdiag_trace_expr(cfg.fb, cfg.omega, cfg.eta * cfg.eta)


def diag_trace_closed(cfg: QubitConfig) -> complex:
    """Closed-form one-cycle trace eta*(cos(Omega/2) - i*r*sin(Omega/2)).

    Written as a single complex number, the polar form carries magnitude
    eta*sqrt(cos^2 + r^2 sin^2) and the branch-continued arctan phase.
    """
    half = 0.5 * cfg.omega
    return cfg.eta * complex(math.cos(half), -cfg.r * math.sin(half))


def nodal_eta2(fb: float, omega: float) -> float | None:
    """Visibility squared at which the two-cycle trace vanishes, if one exists.

    Solves eta^2 = 1 / (1 + sqrt(fb) cos(omega)); returns None when the
    solution leaves [0, 1].
    """
    if not (0.0 <= fb < 1.0):
        raise RangeError(f"fb must lie in [0, 1), got {fb!r}")
    denom = 1.0 + math.sqrt(fb) * math.cos(omega)
    if denom <= 0.0:
        return None
    eta2 = 1.0 / denom
    if eta2 > 1.0 + 1e-15:
        return None
    return min(eta2, 1.0)


def bracket_certificate(fb: float, omega: float, eta2: float, eps: float = 1e-3) -> bool:
    """True when the trace changes sign across eta^2 +/- eps, certifying a node."""
    below = offdiag_trace_expr(fb, omega, eta2 - eps)
    above = offdiag_trace_expr(fb, omega, eta2 + eps)
    return below * above < 0.0


class NodalRow(NamedTuple):
    fb: float
    omega: float
    eta2: float
    status: str


def scan_nodal_surface(fb_grid, omega_grid) -> list[NodalRow]:
    """Tabulate the nodal surface over a (fb, omega) grid.

    Rows with no solution in [0, 1] carry status ``no_solution`` and NaN.
    """
    rows = []
    for fb in fb_grid:
        for omega in omega_grid:
            eta2 = nodal_eta2(float(fb), float(omega))
            if eta2 is None:
                rows.append(NodalRow(float(fb), float(omega), float("nan"), "no_solution"))
            else:
                rows.append(NodalRow(float(fb), float(omega), eta2, "ok"))
    return rows


def maximally_mixed_traces(deltas) -> list[tuple[float, float, float]]:
    """Both cycle traces of the maximally mixed qubit under exp(-i delta sigma_z).

    Runs the actual trace pipeline with the degeneracy override; the results
    equal cos(2 delta) and cos(delta), which share no zero.
    """
    eye = np.eye(2)
    rho = states.make_density([0.5, 0.5], eye)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    rows = []
    for delta in deltas:
        u = algebra.expm_generator(sz, float(delta))
        off = phases.gamma_offdiag(rho, rho, u, allow_degenerate=True).trace_value
        diag = phases.gamma_diag(rho, u, allow_degenerate=True).trace_value
        rows.append((float(delta), float(off.real), float(diag.real)))
    return rows


def common_nodal_margin(rows) -> float:
    """min over rows of max(|two-cycle|, |one-cycle|); positive means no common node."""
    return min(max(abs(off), abs(diag)) for _, off, diag in rows)

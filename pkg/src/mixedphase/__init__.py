"""Geometric phases of mixed quantum states.

Builds density matrices with quasi-orthogonal complements and cyclic families,
parallel-transports unitary paths, evaluates diagonal / off-diagonal / l-cycle
phase functionals, decomposes permuting transport operators into cycle and
diagonal traces, reproduces the qubit closed forms and nodal surfaces, and
simulates two-photon coincidence fringes.
"""

from .algebra import SpectralDecomposition, eig_hermitian, expm_generator, psd_root
from .errors import MixedPhaseError
from .franson import FringeScan, TwoPhotonState, arm_unitaries, coincidence_intensity, fringe_fit, purify
from .phases import PhaseResult, gamma_diag, gamma_l, gamma_offdiag, gamma_pure, phase_factor, sigma
from .qubitlab import QubitConfig, diag_trace_closed, nodal_eta2, offdiag_trace_closed
from .states import (
    DensityMatrix,
    QuasiOrthogonalFamily,
    bures_fidelity,
    cyclic_family,
    make_density,
    quasi_complement,
)
from .structure import DecompositionReport, d_term, decompose, p_term, split_identity_check
from .transport import PathSegment, UnitaryPath, evolve, parallelize, solid_angle, visibility

__version__ = "0.1.0"

__all__ = [
    "DecompositionReport",
    "DensityMatrix",
    "FringeScan",
    "MixedPhaseError",
    "PathSegment",
    "PhaseResult",
    "QuasiOrthogonalFamily",
    "QubitConfig",
    "SpectralDecomposition",
    "TwoPhotonState",
    "UnitaryPath",
    "arm_unitaries",
    "bures_fidelity",
    "coincidence_intensity",
    "cyclic_family",
    "d_term",
    "decompose",
    "diag_trace_closed",
    "eig_hermitian",
    "expm_generator",
    "fringe_fit",
    "gamma_diag",
    "gamma_l",
    "gamma_offdiag",
    "gamma_pure",
    "make_density",
    "nodal_eta2",
    "offdiag_trace_closed",
    "p_term",
    "parallelize",
    "phase_factor",
    "psd_root",
    "purify",
    "quasi_complement",
    "sigma",
    "solid_angle",
    "split_identity_check",
    "visibility",
    "evolve",
]

"""Exception types shared across the package."""


class MixedPhaseError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatch(MixedPhaseError, ValueError):
    """Operands have incompatible or non-square shapes."""


class NotHermitian(MixedPhaseError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class NoConvergence(MixedPhaseError, ArithmeticError):
    """The eigensolver failed to converge."""


class NotPositive(MixedPhaseError, ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class BadSpectrum(MixedPhaseError, ValueError):
    """Eigenvalues are negative or do not sum to one."""


class BadBasis(MixedPhaseError, ValueError):
    """Basis columns are not orthonormal or have the wrong dimension."""


class BadPairing(MixedPhaseError, ValueError):
    """An index pairing is not a fixed-point-free permutation."""


class Degenerate(MixedPhaseError, ValueError):
    """The operation requires a nondegenerate spectrum."""


class NotQuasiOrthogonal(MixedPhaseError, ValueError):
    """Two states do not share a basis with permuted eigenvalue assignments."""


class BasisMismatch(MixedPhaseError, ValueError):
    """Objects built over different bases were combined."""


class ZeroOverlapStep(MixedPhaseError, ArithmeticError):
    """A transported eigenstate overlap collapsed below the floor in one step."""


class AntipodalEndpoints(MixedPhaseError, ArithmeticError):
    """Endpoint visibility is too small for a solid angle to be defined."""


class MultipleCycles(MixedPhaseError, ValueError):
    """The permuting part of the operator contains more than one nontrivial cycle."""


class RangeError(MixedPhaseError, ValueError):
    """A scalar parameter lies outside its documented range."""


class InsufficientSamples(MixedPhaseError, ValueError):
    """Too few sample points, or too short a span, for a stable fit."""


class ParseError(MixedPhaseError, ValueError):
    """An input file is not syntactically valid."""


class ValidationError(MixedPhaseError, ValueError):
    """An input descriptor is structurally invalid."""

"""Exception types shared across the package.

Everything derives from :class:`ConeJsrError` so callers can catch the
package's failures with a single handler while still being able to
distinguish individual conditions.
"""


class ConeJsrError(Exception):
    """Base class for all errors raised by this package."""


class NotPointed(ConeJsrError):
    """Facet normals do not have full rank, so the cone contains a line."""


class NotFull(ConeJsrError):
    """The cone has empty interior."""


class Inconsistent(ConeJsrError):
    """Generators and facet normals do not describe the same cone."""


class DimensionLimit(ConeJsrError):
    """Input exceeds the size supported by an enumeration routine."""


class DimensionMismatch(ConeJsrError):
    """Operands have incompatible dimensions."""


class DegenerateBase(ConeJsrError):
    """The base functional vanishes on a generator."""


class FaceCapExceeded(ConeJsrError):
    """Face enumeration exceeded the configured cap."""


class NotSimplicial(ConeJsrError):
    """Lattice operations require a simplicial (or orthant) cone."""


class NotInterior(ConeJsrError):
    """A point required to be interior lies on or outside the boundary."""


class NotConePreserving(ConeJsrError):
    """A matrix maps some generator outside the cone."""


class NotCrossPositive(ConeJsrError):
    """A matrix violates the tangency condition on an incidence pair."""


class ToleranceConflict(ConeJsrError):
    """Two independent decision procedures disagree at the working tolerance."""


class PreconditionFailed(ConeJsrError):
    """A documented precondition of the operation does not hold."""


class FamilyReducible(ConeJsrError):
    """The family shares an invariant face, so no irreducible witness exists."""


class BudgetExceeded(ConeJsrError):
    """A search or enumeration ran out of its node budget."""


class BadGrid(ConeJsrError):
    """A duration grid is empty, non-positive, or sums to the wrong total."""


class BadParams(ConeJsrError):
    """A numeric parameter is outside its admissible range."""


class NotProjection(ConeJsrError):
    """A jump-pair matrix is not idempotent within tolerance."""

    def __init__(self, index, message=""):
        self.index = index
        super().__init__(message or f"pair {index}: matrix is not a projection")


class NotCommuting(ConeJsrError):
    """A jump pair violates the commutation requirement."""

    def __init__(self, index, message=""):
        self.index = index
        super().__init__(message or f"pair {index}: flow and projection do not commute")


class IndexOutOfRange(ConeJsrError, IndexError):
    """A signal refers to a pair index that does not exist."""


class ViolationFound(ConeJsrError):
    """A certified inequality failed; this signals a bounds bug."""


class MethodUnavailable(ConeJsrError):
    """The requested method does not apply to this input."""


class PerturbationEscapes(ConeJsrError):
    """A perturbed matrix could not be repaired back into the cone-preserving set."""


class ParseError(ConeJsrError):
    """A problem document is structurally invalid."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class ValidationError(ConeJsrError):
    """A problem document parsed but failed semantic validation."""

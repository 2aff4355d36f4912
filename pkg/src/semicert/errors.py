"""Exception types shared across the toolkit."""


class CertifyError(Exception):
    """Base class for every toolkit-specific error."""


class NonPositiveDeterminant(CertifyError):
    """Raw matrix has determinant <= 0 and defines no half-plane isometry."""


class NotHyperbolic(CertifyError):
    """Operation requires a hyperbolic transformation."""


class CoincidentEndpoints(CertifyError):
    """Two boundary points expected to be distinct coincide."""


class DegenerateCrossRatio(CertifyError):
    """Cross ratio is 0, 1 or infinity, so no angle/distance is defined."""


class AxesCross(CertifyError):
    """Lines cross, but the operation needs disjoint lines."""


class SharedEndpoint(CertifyError):
    """Lines share a boundary endpoint."""


class AxesNotDisjoint(CertifyError):
    """Pair operation requires disjoint axes in the admissible configuration."""


class OverlappingArcs(CertifyError):
    """Arc union constructor received arcs with intersecting closures."""


class ThresholdNotMet(CertifyError):
    """Translation lengths fall short of the constructive threshold."""


class AxesNotDisjointOutside(CertifyError):
    """Disjoint-pair construction needs cross ratio > 1."""


class AxesDoNotCross(CertifyError):
    """Crossing-pair construction needs crossing axes (cross ratio < 0)."""


class NoCommonAlpha(CertifyError):
    """Shared-fixed-point construction needs one common attracting point."""


class PreconditionViolated(CertifyError):
    """A stated hypothesis of the decision procedure fails; the message says which."""


class VerificationFailed(CertifyError):
    """A constructed certificate did not survive independent re-verification."""


class CrossRatioOutOfRange(CertifyError):
    """Pair test called outside its cross-ratio regime."""


class SearchExhausted(CertifyError):
    """Bounded witness search ended without a hit; signals a violated precondition."""


class BudgetExceeded(CertifyError):
    """Word enumeration hit its configured budget."""


class InvalidMatrix(CertifyError):
    """Cocycle input matrix is not usable (singular or malformed)."""


class ParseError(CertifyError):
    """Input file or value could not be parsed; the message carries the field."""

"""Exception hierarchy.

Every error raised by the package derives from :class:`ToricError`. Three
mixins classify errors for the command line front end: a
:class:`MathematicalNegative` is a well-posed question with a negative
answer (for example an angle vector outside the angles' cone), a
:class:`SolverFailure` is a numerical method that did not converge, and
everything else is an input error.
"""


class ToricError(ValueError):
    """Base class for all package errors."""


class MathematicalNegative:
    """Marker for errors that encode a negative mathematical answer."""


class SolverFailure:
    """Marker for numerical failures."""


# lattice_cone
class NotPrimitive(ToricError):
    pass


class NotStrictlyConvex(ToricError):
    pass


class NotFullDimensional(ToricError):
    pass


class RedundantNormal(ToricError):
    pass


class NotGood(ToricError, MathematicalNegative):
    """Lattice saturation fails on some face.

    ``facets`` holds the indices of the normals whose span is not saturated.
    """

    def __init__(self, message, facets=(), divisors=()):
        super().__init__(message)
        self.facets = tuple(facets)
        self.divisors = tuple(divisors)


class DimensionMismatch(ToricError):
    pass


class NonPositiveAngle(ToricError):
    pass


class NotInAnglesCone(ToricError, MathematicalNegative):
    """The angle vector is not in the image of the facet map.

    ``eta`` is an integer vector in the kernel of the transposed normal
    matrix with nonzero pairing against the angle vector.
    """

    def __init__(self, message, eta=None, pairing=None):
        super().__init__(message)
        self.eta = eta
        self.pairing = pairing


class NotRCartier(NotInAnglesCone):
    pass


class RayOutsideCone(ToricError, MathematicalNegative):
    pass


# polytope_engine
class ReebNotInterior(ToricError):
    def __init__(self, message, ray=None, pairing=None):
        super().__init__(message)
        self.ray = ray
        self.pairing = pairing


class DegeneratePolytope(ToricError):
    pass


class NotAffine(ToricError):
    pass


# correspondence
class LineSearchFailure(ToricError, SolverFailure):
    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class MaxIterations(ToricError, SolverFailure):
    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class VerificationFailure(ToricError, SolverFailure):
    """The solver stopped but its answer fails the independent forward check."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


# potential
class OutsideCone(ToricError):
    pass


class SingularHessian(ToricError, SolverFailure):
    pass


class StepTooLarge(ToricError):
    pass


# invariants
class SingularMomentMatrix(ToricError):
    pass


class NotAConeOverPolytope(ToricError, MathematicalNegative):
    pass


# cli
class ConeFileError(ToricError):
    pass


class FixtureCheckFailed(ToricError):
    def __init__(self, message, citation=""):
        super().__init__(message)
        self.citation = citation

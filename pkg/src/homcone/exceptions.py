"""Exception hierarchy shared by all modules."""


class HomconeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(HomconeError, ValueError):
    pass


class ShapeMismatch(HomconeError, ValueError):
    pass


class NotPSD(HomconeError, ValueError):
    """A pivot fell below the negative tolerance threshold."""


class NotInSubspace(HomconeError, ValueError):
    """A matrix that should lie in some V_ij does not."""


class AxiomNotVerified(HomconeError):
    """The frame fails the closure axioms, so the operation is undefined."""


class NotInGroup(HomconeError, ValueError):
    pass


class NotInterior(HomconeError, ValueError):
    pass


class NotInClosure(HomconeError, ValueError):
    pass


class NotInSpan(NotInClosure):
    pass


class WitnessConditionFails(HomconeError):
    """The strict inequality needed for a two-ray reduction does not hold.

    ``vacuous`` is set when one of the inputs is zero (typically because the
    subspace it must live in is trivial), so the question never arises.
    """

    def __init__(self, message, vacuous=False):
        super().__init__(message)
        self.vacuous = vacuous


class InvalidLabelling(HomconeError, ValueError):
    pass


class TooLarge(HomconeError, ValueError):
    pass


class ParseError(HomconeError, ValueError):
    pass

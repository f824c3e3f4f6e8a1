"""Exception types raised across the package."""


class PencilError(Exception):
    """Base class for all package errors."""


class NotHermitianError(PencilError, ValueError):
    pass


class MatrixFormatError(PencilError, ValueError):
    """Malformed matrix JSON or an array of the wrong shape."""


class EigenSolverError(PencilError, ArithmeticError):
    pass


class LambdaExcluded(PencilError, ValueError):
    """The pencil parameter lies in {-1, 0} (or {-1, 0, 1} where required)."""

    def __init__(self, lam, excluded=(-1.0, 0.0)):
        self.lam = lam
        self.excluded = tuple(excluded)
        super().__init__(f"lambda={lam!r} is excluded (must avoid {self.excluded})")


class Infeasible(PencilError):
    """The generic part admits no normal form ``B (+) -B`` at this lambda.

    ``reason`` is one of the :class:`~projpencil.feasibility.Reason` values.
    """

    def __init__(self, reason, detail=""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{getattr(reason, 'value', reason)}: {detail}")


class CommutationViolation(PencilError, ValueError):
    pass


class MissingE(PencilError, ValueError):
    pass


class ZeroProjection(PencilError, ValueError):
    pass


class NotAPencilPair(PencilError, ValueError):
    pass


class DifferentComponents(PencilError, ValueError):
    def __init__(self, label_a, label_b):
        self.label_a = tuple(label_a)
        self.label_b = tuple(label_b)
        super().__init__(
            f"pairs lie in different components: {self.label_a} vs {self.label_b}")


class InternalContradiction(PencilError, RuntimeError):
    """An admissible set with more than two values or an untemplated pair.

    Always a numerical or logic bug; carries the offending data.
    """

    def __init__(self, message, T=None, admissible=()):
        self.T = T
        self.admissible = tuple(admissible)
        super().__init__(message)


class PredictionMismatch(PencilError, AssertionError):
    def __init__(self, what, predicted, measured):
        self.what = what
        self.predicted = predicted
        self.measured = measured
        super().__init__(f"{what}: predicted {predicted}, measured {measured}")


class DimensionMismatch(PencilError, ValueError):
    pass

"""Exception hierarchy.

Errors derived from :class:`Falsification` mean a checked mathematical claim
did not hold; the CLI maps them to exit code 1.  :class:`SizeLimit` maps to
exit code 3.
"""


class ConfFlagError(Exception):
    """Base class for all errors raised by this package."""


class Falsification(ConfFlagError):
    """A verified invariant failed.  ``witness`` carries machine-checkable detail."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


class SizeLimit(ConfFlagError):
    pass


class SizeMismatch(ConfFlagError, ValueError):
    pass


class SingularMatrix(ConfFlagError, ArithmeticError):
    pass


class DegreeMismatch(ConfFlagError, ValueError):
    pass


class ZeroInput(ConfFlagError, ValueError):
    pass


class DivisionFailure(Falsification, ArithmeticError):
    pass


class NonIntegralMultiplicity(Falsification):
    pass


class NonPolynomialEntry(Falsification):
    pass


class OddPowerEntry(Falsification):
    pass


class SingularDeterminant(Falsification):
    pass


class NonConstantDeterminant(Falsification):
    pass


class MismatchWithPsi(Falsification):
    pass


class EquivarianceFailure(Falsification):
    pass


class CoincidentPoints(ConfFlagError, ValueError):
    pass


class DependentPolynomials(ConfFlagError, ArithmeticError):
    def __init__(self, message, config=None, smallest_singular_value=None):
        super().__init__(message)
        self.config = config
        self.smallest_singular_value = smallest_singular_value


class CrossClusterCollision(ConfFlagError, ValueError):
    pass


class NonConvergentLimit(ConfFlagError, ArithmeticError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AmbiguousMatch(ConfFlagError):
    pass

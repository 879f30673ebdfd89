"""Exception types shared across the workbench."""


class LpalgError(Exception):
    """Base class for all workbench errors."""


class DivisionByZero(LpalgError):
    """Exact division by the zero scalar."""


class DenominatorVanishes(LpalgError):
    """A substitution made some denominator evaluate to zero."""


class UndeclaredConjugation(LpalgError):
    """An indeterminate appears without a conjugation rule."""


class DegenerateFamilyParameters(LpalgError):
    """Family arguments hit a singular value of the parametrization."""


class AlphabetMismatch(LpalgError):
    """Operands declared over different alphabets."""


class NonTermination(LpalgError):
    """Rewrite step budget exceeded or a reduction cycle detected."""


class DegreeBudgetExceeded(LpalgError):
    """Requested degree above the configured bound."""


class CentralityNotSatisfied(LpalgError):
    """Quotient construction requires a central quadratic element."""


class AssumptionViolated(LpalgError):
    """A stated hypothesis of the calculus fails for these parameters."""


class OrbitInconsistency(LpalgError):
    """Tensor-component propagation reached the same slot twice with different values."""


class StarNotCompatible(LpalgError):
    """Parameters do not admit the hermitian star structure."""


class SchemaError(LpalgError):
    """Malformed parameter file."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

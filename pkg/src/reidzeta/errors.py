"""Exception hierarchy shared across the package.

Every failure mode that callers are expected to handle has its own class;
messages carry the offending values so CLI reports can quote them.
"""


class ReidzetaError(Exception):
    """Base class for all package-specific errors."""


# -- arithmetic layer ---------------------------------------------------------

class ZeroArgument(ReidzetaError):
    """A valuation of zero was requested without the +infinity convention."""


class NonIntegralMatrix(ReidzetaError):
    """An operation requiring integer entries received a fractional matrix."""


class NonSquare(ReidzetaError):
    """An operation requiring a square matrix received a rectangular one."""


class SizeLimitExceeded(ReidzetaError):
    """An intermediate integer grew past the configured bit bound."""


class Unsupported(ReidzetaError):
    """Input outside the supported range (e.g. primes beyond the
    deterministic Miller-Rabin witness regime)."""


# -- engine layer -------------------------------------------------------------

class NonIntegerResult(ReidzetaError):
    """The adelic product failed to be a positive integer; signals an input
    outside the model (unreachable on validated input)."""


class HypothesisViolation(ReidzetaError):
    """A factor has singular difference while the caller demanded the strict
    product formula."""


class NotTameAt(ReidzetaError):
    """Some iterate has infinitely many coincidence classes."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"infinitely many classes at iterate n = {n}")


# -- spectra layer ------------------------------------------------------------

class NotCommuting(ReidzetaError):
    """Joint eigenvalue extraction needs a commuting pair."""


class IrrationalSpectrum(ReidzetaError):
    """A characteristic polynomial does not split over Q; supply external
    eigenvalue data instead."""


# -- zeta layer ---------------------------------------------------------------

class NoRecurrenceFound(ReidzetaError):
    """No linear recurrence within the order bound fits the sequence.

    This is evidence, not proof, that the generating series is irrational.
    """


class NotApplicable(ReidzetaError):
    """The decomposition hypotheses fail for the supplied input."""


# -- oracle layer -------------------------------------------------------------

class BudgetExceeded(ReidzetaError):
    """A brute-force enumeration would exceed the configured cell budget."""


class SingularDifference(ReidzetaError):
    """The brute-force oracle needs a nonsingular endomorphism difference."""


class InvalidTable(ReidzetaError):
    """A multiplication table fails the group axioms or a supplied map is
    not an endomorphism of it."""


class NotAHomomorphism(ReidzetaError):
    """The supplied abelianization pair does not extend to the quotient."""


# -- cli layer ----------------------------------------------------------------

class SpecValidationError(ReidzetaError):
    """A problem-description file failed parsing or validation."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can report
failures without parsing messages.
"""


class CbkdvError(Exception):
    code = "error"


class ValidationError(CbkdvError, ValueError):
    """Inputs violate a documented precondition."""

    code = "validation"


class InvalidParameters(ValidationError):
    code = "invalid_parameters"


class ConstraintViolation(ValidationError):
    code = "sign_constraint"


class DegenerateWidth(ValidationError):
    code = "degenerate_width"


class DegenerateAmplitudes(ValidationError):
    code = "degenerate_amplitudes"


class SweepOutsideValidity(ValidationError):
    code = "sweep_outside_validity"


class DomainTooNarrow(ValidationError):
    code = "domain_too_narrow"


class NumericalFailure(CbkdvError, ArithmeticError):
    """A computation ran but did not produce a usable answer."""

    code = "numerical"


class NoConvergence(NumericalFailure):
    code = "no_convergence"


class ConvergedToDegenerate(NumericalFailure):
    code = "converged_to_degenerate"

    def __init__(self, message, candidate=None):
        super().__init__(message)
        self.candidate = candidate


class BlowUp(NumericalFailure):
    code = "blow_up"

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class NonvanishingStrayTerms(NumericalFailure):
    code = "stray_terms"

"""Exception hierarchy shared by the kernel, the DSL and the harness."""


class QThetaError(Exception):
    """Base class. ``span`` is filled in by the DSL evaluator when known."""

    span = None

    def __init__(self, message="", span=None):
        super().__init__(message)
        if span is not None:
            self.span = span

    def with_span(self, span):
        if self.span is None:
            self.span = span
        return self

    def __str__(self):
        msg = super().__str__()
        if self.span is not None:
            return f"{msg} (at {self.span})"
        return msg


class ConfigurationError(QThetaError):
    pass


class NotInvertible(QThetaError):
    pass


class EvaluationError(QThetaError):
    pass


class DomainError(QThetaError):
    pass


class BoundViolation(QThetaError):
    pass


class NonTermination(QThetaError):
    pass


class PrecisionError(QThetaError):
    """The tracked exact region does not cover the requested modulus."""


class UnknownIdentity(QThetaError):
    pass

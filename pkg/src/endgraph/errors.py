"""Exception hierarchy shared by every module of the package."""


class EndGraphError(Exception):
    """Base class for all errors raised by endgraph."""


class PresentationError(EndGraphError):
    """A presentation generator misbehaved (bad level, span violation, ...)."""


class ParseError(EndGraphError):
    """A serialized document could not be decoded."""


class ValidationError(EndGraphError):
    """A decoded document violates a digraph invariant."""


class UnknownEndError(EndGraphError, KeyError):
    def __str__(self) -> str:
        return f"unknown end: {self.args[0]!r}"


class InfeasibleError(EndGraphError):
    """No object with the requested property exists on this truncation.

    ``certificate`` carries a separator certificate explaining the failure
    when one is available.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class PreconditionError(EndGraphError):
    pass


class InsufficientInputError(EndGraphError):
    pass


class ContradictionError(EndGraphError):
    """A flow value exceeded the degree a caller claimed for an end."""

    def __init__(self, message: str, flow_value: int):
        super().__init__(message)
        self.flow_value = flow_value

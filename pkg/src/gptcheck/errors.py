"""Exception hierarchy.

``ValidationError`` means malformed input, ``PreconditionError`` means
well-formed input on which the requested operation is not defined.  The CLI
maps them to exit codes 2 and 3.
"""


class GptError(Exception):
    pass


class ValidationError(GptError, ValueError):
    pass


class SizeError(ValidationError):
    pass


class PreconditionError(GptError):
    pass


class NotApplicableError(PreconditionError):
    pass


class NoWitnessError(PreconditionError):
    pass


class NotSpookyError(PreconditionError):
    pass


class DegenerateAssemblageError(PreconditionError):
    pass


class UnboundedError(GptError):
    """The LP objective is unbounded on a non-empty feasible set."""


class InternalInconsistencyError(GptError, RuntimeError):
    """A state the theory proves impossible was reached; indicates a bug."""

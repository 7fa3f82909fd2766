"""Exception hierarchy.

``MalformedInputError`` marks inputs that parse but violate a mathematical
invariant (the CLI maps it to exit code 1).  Witness problems get their own
subclass so that a malformed witness is never confused with a witness that
simply fails its inclusion check.
"""


class MahavierError(Exception):
    """Base class for all library errors."""


class MalformedInputError(MahavierError, ValueError):
    """An input object violates one of its structural invariants."""


class MalformedWitnessError(MalformedInputError):
    """A witness is not well formed against its relation."""


class PreconditionError(MalformedInputError):
    """A named hypothesis of an operation does not hold.

    ``names`` lists every violated condition, most specific first.
    """

    def __init__(self, names, detail=""):
        if isinstance(names, str):
            names = [names]
        self.names = list(names)
        msg = ", ".join(self.names)
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)

    @property
    def name(self):
        return self.names[0]


class TheoremInapplicableError(PreconditionError):
    """The hypotheses of a constructive theorem are not met."""


class UnsupportedInputError(MahavierError, ValueError):
    """The input is valid but outside what an operation handles."""


class ResourceLimitError(MahavierError):
    """An exhaustive search would exceed its feasibility guard."""


class WitnessSearchError(MahavierError):
    """A bounded witness search gave up.

    ``diagnostics`` carries whatever the search last computed.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InputFormatError(MahavierError):
    """A document fails to parse or does not match its schema (CLI exit code 2)."""

class FdpropError(Exception):
    pass


class EnumerationCapExceeded(FdpropError):
    """Enumerating a constraint's solutions would exceed the configured cap."""


class MalformedAutomaton(FdpropError):
    pass


class ConfigError(FdpropError, ValueError):
    pass


class ModelError(FdpropError, ValueError):
    pass


class UnknownModel(ModelError, KeyError):
    pass


class SizeOutOfRange(ModelError):
    pass


class InvariantViolation(FdpropError, AssertionError):
    """A propagator outside the queue was found not to be at fixpoint."""

    def __init__(self, offenders, message=""):
        self.offenders = list(offenders)
        super().__init__(message or f"propagators not at fixpoint: {self.offenders}")

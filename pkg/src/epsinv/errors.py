"""Exception hierarchy shared by all modules."""


class EpsInvError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class InvalidInput(EpsInvError, ValueError):
    exit_code = 1


class DomainError(EpsInvError, ValueError):
    """A point was given outside [0, 1)."""

    exit_code = 1


class RangeError(EpsInvError, ValueError):
    """An affine image leaves [0, 1]."""

    exit_code = 1


class InvalidSystem(EpsInvError, ValueError):
    exit_code = 2


class HypothesisViolated(EpsInvError, ValueError):
    exit_code = 2


class NonFiniteSample(EpsInvError, ArithmeticError):
    exit_code = 1


class CapExceeded(EpsInvError, RuntimeError):
    exit_code = 4

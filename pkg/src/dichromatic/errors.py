"""Exception types raised by the dichromatic package."""


class DichromaticError(Exception):
    """Base class for all computation errors in this package."""


class InvalidSpec(DichromaticError, ValueError):
    """A parameter violates the positivity constraints of a spec."""


class DegenerateAmplitudes(DichromaticError, ValueError):
    """A = B: the running component vanishes and the operation is undefined."""


class ReversedAmplitudes(DichromaticError, ValueError):
    """B > A was passed to an operation that requires A > B."""


class InvalidRange(DichromaticError, ValueError):
    pass


class InvalidProbe(DichromaticError, ValueError):
    pass


class EmptyFamily(DichromaticError, ValueError):
    pass


class ZeroGradient(DichromaticError, ValueError):
    pass


class EmptyTable(DichromaticError, ValueError):
    pass

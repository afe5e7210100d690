"""Exception types shared by the exact kernel and the higher layers."""


class QDualError(Exception):
    pass


class NonExactDivision(QDualError, ArithmeticError):
    """The divisor does not divide the dividend in the Laurent ring."""


class RegistryMismatch(QDualError, ValueError):
    """Operands were built over incompatible variable registries."""


class DomainError(QDualError, ValueError):
    """A value was requested outside the domain where it is defined.

    Raised for poles (zero substituted into a negative power, a vanishing
    lower parameter in a basic hypergeometric series) and for parameters
    outside an identity's documented range.
    """


class ExponentOverflow(QDualError, OverflowError):
    pass

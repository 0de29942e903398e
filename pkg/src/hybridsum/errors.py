"""Exception types shared across the package."""


class HybridSumError(Exception):
    pass


class NotPrime(HybridSumError, ValueError):
    pass


class TooLarge(HybridSumError, ValueError):
    pass


class ZeroInverse(HybridSumError, ZeroDivisionError):
    pass


class PolySyntaxError(HybridSumError, ValueError):
    """Malformed polynomial text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class NegativeExponent(PolySyntaxError):
    pass


class ZeroDenominator(HybridSumError, ValueError):
    pass


class FieldMismatch(HybridSumError, ValueError):
    pass


class NotPolynomial(HybridSumError, ValueError):
    pass


class OrderNotDividing(HybridSumError, ValueError):
    pass


class DuplicateX(HybridSumError, ValueError):
    pass


class ConfigError(HybridSumError, ValueError):
    """Invalid run configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path

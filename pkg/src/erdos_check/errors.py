"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfRangeError(ValueError):
    """A query exceeds the range covered by a prime table."""


class CapacityError(ValueError):
    """A request exceeds a fixed implementation ceiling."""


class PrimitivityViolation(ValueError):
    """Raised when a sequence is not primitive.

    ``witness`` holds a pair ``(a, b)`` with ``a < b`` and ``a`` dividing ``b``.
    """

    def __init__(self, witness):
        a, b = witness
        self.witness = (int(a), int(b))
        super().__init__(f"not primitive: {a} divides {b}")


class CacheFormatError(ValueError):
    """A prime-table cache file is malformed or fails validation."""

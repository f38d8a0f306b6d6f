"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class DegenerateInputError(ValueError):
    """Input data cannot support the requested computation.

    Raised for single-class label sets and zero-range features.
    """

class InputError(ValueError):
    """Invalid argument or malformed input data."""


class InsufficientSamplesError(ValueError):
    """Too few exceedances to resolve a tail probability."""


class UndefinedRatioError(ValueError):
    """A normalized ratio whose numerator and denominator both vanish."""

"""Shared exception bases. Concrete errors live in the module they belong to."""


class FcmError(Exception):
    """Base for all errors raised by this package."""


class DataError(FcmError):
    """Bad or inconsistent input data / artifacts (CLI exit code 3)."""


class NumericalError(FcmError):
    """Numerical kernel failure (CLI exit code 4)."""

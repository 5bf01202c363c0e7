"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, DataError
exits 2, NumericError exits 3.
"""


class ArafuseError(Exception):
    """Base class for package errors."""


class DataError(ArafuseError):
    """Malformed or inconsistent input data (files, labels, ids)."""


class NumericError(ArafuseError):
    """Non-finite values or numeric contract violations during training."""

"""Exception types shared across the toolkit.

ValidationError marks precondition violations (bad specs, mismatched grids,
out-of-range parameters).  CalibrationError marks a frozen-constants file
that fails its integrity check.  The CLI maps them to exit codes 2 and 3.
"""


class ValidationError(ValueError):
    """A precondition of an operation does not hold."""


class CalibrationError(RuntimeError):
    """The frozen calibration constants are missing or corrupted."""

"""Exception types shared across the simulator, with CLI exit codes."""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Bad or inconsistent configuration (unknown key, invalid value)."""


class NumericError(RuntimeError):
    """Numerical failure: instability, blowup, or non-convergent quadrature."""


class DegenerateDataError(ValueError):
    """Count data too degenerate to reconstruct (e.g. a zero-sum basis pair)."""

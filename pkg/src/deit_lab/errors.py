"""Exception and warning types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""


class ConfigError(ValueError):
    """Invalid job configuration (CLI exit code 2)."""


class TruncationWarning(UserWarning):
    """Fock-space truncation lost more weight than the configured budget."""


class SymmetryWarning(UserWarning):
    """A symmetry assumed by an effective model is violated beyond tolerance."""

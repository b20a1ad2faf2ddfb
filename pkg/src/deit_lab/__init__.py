"""Numerical laboratory for the double-EIT cross-Kerr model.

Subpackages follow the physics: ``eit`` and ``dressed`` for the atomic
medium, ``fockspace``/``stateops``/``catlab`` for cat-state engineering and
the Duan witness, ``blockade`` for the bimodal-cavity photon blockade.
"""

__version__ = "0.1.0"

from .errors import ConfigError, NumericalError, TruncationWarning, ValidationError

__all__ = [
    "ConfigError",
    "NumericalError",
    "TruncationWarning",
    "ValidationError",
    "__version__",
]

"""novspec: exact spectral invariants over Novikov fields.

Novikov-ring arithmetic, filtered complexes with spectral numbers,
toric potentials with certified critical branes, quasimap homology
ranks, and quasi-state estimates, all over exact rational or Gaussian
rational coefficients (with a tolerance-carrying floating mode).
"""

from .fields import NEG_INF, CoefficientField, GaussianRational, field_for_mode
from .novikov import NovikovScalar

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "CoefficientField",
    "GaussianRational",
    "NovikovScalar",
    "field_for_mode",
    "__version__",
]

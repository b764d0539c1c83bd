"""Quantum mutual information along unitary orbits: extremal states, marginal regions,
collision models and Young-tableau structure of minimal tables."""
from .errors import BudgetExceeded, DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, binary_entropy, sample_spectrum, shannon_entropy
from .states import DensityMatrix, MarginalPoint, XState, marginal_point, partial_trace, qmi

__version__ = "0.1.0"
SCHEMA_VERSION = 1

__all__ = [
    "BudgetExceeded",
    "DensityMatrix",
    "DimensionError",
    "DomainError",
    "MarginalPoint",
    "PreconditionError",
    "SCHEMA_VERSION",
    "Spectrum",
    "XState",
    "binary_entropy",
    "marginal_point",
    "partial_trace",
    "qmi",
    "sample_spectrum",
    "shannon_entropy",
]

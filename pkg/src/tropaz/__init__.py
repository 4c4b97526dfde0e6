"""Zero-temperature limit of periodically weighted Aztec diamond dimer models."""

from .errors import ConsistencyError, GuardViolation, TropazError, ValidationError
from .lattice import EdgeRef, build_fundamental_domain, build_torus_graph, domain_from_values, uniform_domain
from .pipeline import Pipeline

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "EdgeRef",
    "GuardViolation",
    "Pipeline",
    "TropazError",
    "ValidationError",
    "build_fundamental_domain",
    "build_torus_graph",
    "domain_from_values",
    "uniform_domain",
]

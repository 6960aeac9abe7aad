"""Quantum-walk spatial search on a periodic honeycomb lattice."""

__version__ = "0.1.0"

from .lattice import KPoint, LatticeConfig, LatticeError, VertexAddress  # noqa: E402
from .search import ConfigurationError, SearchRun, fit_scaling, run_search  # noqa: E402
from .spectral import SpectralAnalysisError, predict  # noqa: E402
from .walk import SearchTarget, WalkState, uniform_state  # noqa: E402

__all__ = [
    "__version__",
    "ConfigurationError",
    "KPoint",
    "LatticeConfig",
    "LatticeError",
    "SearchRun",
    "SearchTarget",
    "SpectralAnalysisError",
    "VertexAddress",
    "WalkState",
    "fit_scaling",
    "predict",
    "run_search",
    "uniform_state",
]

"""Simulation and analytics toolkit for the Poisson line Cox point process."""

__version__ = "0.1.0"

from .geometry import LineParams, Point2, DiskWindow  # noqa: F401
from .sampler import ModelParams, CoxPoint, Realization  # noqa: F401
from .rng import SeedSpec  # noqa: F401
from .quadrature import QuadratureSpec  # noqa: F401

"""Numerical laboratory for continuous-time no-regret learning dynamics."""

from .dynamics import DynamicsModel, Kind, matched_initialization
from .errors import (ConfigurationError, DivergenceError, DomainError, LearnDynError,
                     PoleError, SingularityError, StructureError, SuiteFailure)
from .signals import AnalyticSignal, SampledSignal, SinusoidTerm
from .sim import Trajectory, simulate

__version__ = "0.1.0"

__all__ = [
    "AnalyticSignal", "ConfigurationError", "DivergenceError", "DomainError", "DynamicsModel",
    "Kind", "LearnDynError", "PoleError", "SampledSignal", "SingularityError", "SinusoidTerm",
    "StructureError", "SuiteFailure", "Trajectory", "matched_initialization", "simulate",
]

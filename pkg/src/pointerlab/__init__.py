"""Pointer-reading statistics of inaccurate (weak) measurements.

Classical stochastic networks and small quantum systems are read out by
Gaussian pointers whose initial position uncertainty dwarfs every
displacement they can pick up.  The library computes the resulting
reading densities with and without conditioning on the final state,
extracts path probabilities and their sign-changing quantum
counterparts, verifies the collapse, causality and reshaping identities,
and cross-checks everything by Monte Carlo.
"""

from . import classical, kernels, quantum, sampling, spin
from .errors import (
    DegenerateWeightSum,
    DomainError,
    EnvelopeFailure,
    ExecutionError,
    IllConditionedPostselection,
    NegativeWeight,
    ParseError,
    PointerLabError,
    SupportMismatch,
    UnreachableFinalState,
    ValidationError,
)
from .grids import DensityGrid, DensityGrid2D, span_grid
from .kernels import GaussianKernel, WeightedShiftSet

__all__ = [
    "classical",
    "kernels",
    "quantum",
    "sampling",
    "spin",
    "DensityGrid",
    "DensityGrid2D",
    "span_grid",
    "GaussianKernel",
    "WeightedShiftSet",
    "PointerLabError",
    "DegenerateWeightSum",
    "UnreachableFinalState",
    "IllConditionedPostselection",
    "NegativeWeight",
    "EnvelopeFailure",
    "SupportMismatch",
    "DomainError",
    "ParseError",
    "ValidationError",
    "ExecutionError",
]

__version__ = "0.1.0"

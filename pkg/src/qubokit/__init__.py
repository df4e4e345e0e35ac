"""QUBO encodings for constrained combinatorial problems.

Builds TSP / bin-packing / knapsack instances into quadratic binary models
under slack-variable or unbalanced penalty encodings, and evaluates encoding
quality by exhaustive spectrum ranking, QAOA p=1 landscape scans, penalty
tuning, and simulated-annealing success rates.
"""

from .constraints import DEFAULT_PENALTIES, InequalityConstraint, PenaltyConfig
from .model import IsingModel, QuadraticBinaryModel, VariableRegistry

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PENALTIES",
    "InequalityConstraint",
    "IsingModel",
    "PenaltyConfig",
    "QuadraticBinaryModel",
    "VariableRegistry",
    "__version__",
]

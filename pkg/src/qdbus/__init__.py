"""Quantum-dot data bus simulations.

Restricted-subspace Hubbard dynamics for one and two electrons, perfect
state transfer on engineered chains, double-dot electron separation, and
Hund-Mulliken energetics for freezing tunnel couplings.
"""

from qdbus.errors import (
    BracketingError,
    ContractError,
    InvalidChainError,
    NumericalError,
)

__all__ = [
    "BracketingError",
    "ContractError",
    "InvalidChainError",
    "NumericalError",
]

__version__ = "0.1.0"

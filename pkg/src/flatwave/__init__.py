"""Exact flat space wavefunctions of multigraphs from tubings."""

from .graph import Graph, Subgraph
from .tubes import enumerate_tubes
from .tubings import enumerate_admissible_tubings, enumerate_complete_tubings
from .wavefunction import (
    Method,
    adjoint,
    psi_boundary,
    psi_bulk,
    psi_canonical,
    psi_recursion,
    verify_all,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Method",
    "Subgraph",
    "adjoint",
    "enumerate_admissible_tubings",
    "enumerate_complete_tubings",
    "enumerate_tubes",
    "psi_boundary",
    "psi_bulk",
    "psi_canonical",
    "psi_recursion",
    "verify_all",
]

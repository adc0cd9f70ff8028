"""Exact computations for graph C*-algebras, their AF cores, the (V, H)
interaction of a graph and finite partial dynamical systems."""

__version__ = "0.1.0"

from .af import AfElement, bratteli_diagram, multiply
from .errors import ConsistencyError, DomainError, InputError
from .graph import DirectedGraph, Path, graph_from_edges, graph_verdicts, validate_graph
from .lasso import Lasso
from .psys import PartialSystem, make_system, validate_system
from .scalar import ExactScalar

__all__ = [
    "AfElement",
    "ConsistencyError",
    "DirectedGraph",
    "DomainError",
    "ExactScalar",
    "InputError",
    "Lasso",
    "PartialSystem",
    "Path",
    "bratteli_diagram",
    "graph_from_edges",
    "graph_verdicts",
    "make_system",
    "multiply",
    "validate_graph",
    "validate_system",
]

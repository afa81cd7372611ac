"""Exact computations with Sullivan models of elliptic spaces.

Cohomology, LS-category, zero-divisor cuplengths, the bigraded length L,
the zero-divisor power cocycle, and certified bounds on the higher
topological complexity ``TC_r``, all over the rationals.
"""
from .algebra import Element, GeneratorSpec, GradedAlgebra
from .errors import CapExceeded, HypothesisError, ParseError, SullivanError, ValidationError
from .model import BasisChange, ModelPresentation, StructureFlags, validate

__version__ = "0.1.0"

__all__ = [
    "BasisChange",
    "CapExceeded",
    "Element",
    "GeneratorSpec",
    "GradedAlgebra",
    "HypothesisError",
    "ModelPresentation",
    "ParseError",
    "StructureFlags",
    "SullivanError",
    "ValidationError",
    "validate",
]

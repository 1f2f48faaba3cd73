"""Finite laboratory for Fraïssé classes with a distinguished base reduct:
property checkers, amalgamation search, a generic-structure builder,
compatibility analysis of conditions and automorphism hunts."""

from .ages import AgeSpec
from .signature import Signature
from .structure import FinStructure, make_structure

__all__ = ["AgeSpec", "FinStructure", "Signature", "make_structure"]
__version__ = "0.1.0"

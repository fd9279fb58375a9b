"""Finite information systems, information frames and stratified conjunctive logics."""

from .errors import ArtifactError
from .model import Frame, InfoSystem, Morphism
from .tokens import Atom, Pair, SetTok

__all__ = ["ArtifactError", "Atom", "Frame", "InfoSystem", "Morphism", "Pair", "SetTok"]

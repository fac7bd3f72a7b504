"""Divisible designs from chain geometries over twisted dual numbers."""

from .design import Design, build_design, verify_dd
from .field import Automorphism, FieldSpec, field_new, gf
from .projline import ProjectiveLine, ProjPoint
from .ring import RingElement, RingSpec

__all__ = ["Automorphism", "Design", "FieldSpec", "ProjPoint", "ProjectiveLine",
           "RingElement", "RingSpec", "build_design", "field_new", "gf", "verify_dd"]
__version__ = "0.1.0"

"""Computable objects for tent-map inverse limits and their measured quotients."""

from .arith import Interval, Parameter, QL, SideClass, classify_side, escalate
from .errors import (DepthExhausted, DomainError, EnteredGamma, InGrandOrbit, Inconsistent,
                     NotConverged, NotInY, NotMarkov, NotRealizable, PrecisionExhausted,
                     TentlabError, TypeMismatch, UnknownSuite)

__version__ = "0.1.0"

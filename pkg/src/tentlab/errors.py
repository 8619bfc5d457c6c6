"""Exception types raised by tentlab."""

from __future__ import annotations


class TentlabError(Exception):
    """Base class for every error raised by the library."""


class DomainError(TentlabError):
    pass


class PrecisionExhausted(TentlabError):
    pass


class NotRealizable(TentlabError):
    pass


class NotInY(TentlabError):
    pass


class NotMarkov(TentlabError):
    pass


class NotConverged(TentlabError):
    pass


class InGrandOrbit(TentlabError):
    pass


class TypeMismatch(TentlabError):
    pass


class DepthExhausted(TentlabError):
    pass


class Inconsistent(TentlabError):
    pass


class UnknownSuite(TentlabError):
    pass


class EnteredGamma(TentlabError):
    """The orbit being followed landed in the plateau at `step`."""

    def __init__(self, step: int, where: str = "interior"):
        super().__init__(f"orbit entered the plateau at step {step} ({where})")
        self.step = step
        self.where = where


class Uncertain(TentlabError):
    """An interval comparison could not be decided at the current precision.

    Internal signal: public operations catch it and retry at a higher
    precision, turning it into PrecisionExhausted at the cap.
    """

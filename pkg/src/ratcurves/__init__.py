"""Rational curves on blowups of products of projective spaces: exact linear
systems for incidence fibers, splitting types on P^1, and jet lifts."""

from .errors import RatCurvesError
from .geometry import AmbientSpace, BlowupTower, CurveClass, build_tower, check_main_hypotheses
from .morphism import MorphismP1, splitting_tangent_pullback, validate

__version__ = "0.1.0"

__all__ = [
    "RatCurvesError",
    "AmbientSpace",
    "BlowupTower",
    "CurveClass",
    "build_tower",
    "check_main_hypotheses",
    "MorphismP1",
    "splitting_tangent_pullback",
    "validate",
]

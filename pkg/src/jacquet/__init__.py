"""Exact computation of Jacquet modules of spherical principal series."""

from .analysis import (
    all_certificates,
    filtration_report,
    formal_character,
    open_question_probe,
    relation_certificate,
    splitting_test,
)
from .boundary import BoundaryValueResult, boundary_map, construct_LT, solve_LT_level, verify_bv
from .liedata import Weight, load_algebra
from .spherical import SphericalModule, build_module

__all__ = [
    "BoundaryValueResult",
    "SphericalModule",
    "Weight",
    "all_certificates",
    "boundary_map",
    "build_module",
    "construct_LT",
    "filtration_report",
    "formal_character",
    "load_algebra",
    "open_question_probe",
    "relation_certificate",
    "solve_LT_level",
    "splitting_test",
    "verify_bv",
]

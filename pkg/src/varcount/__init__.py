"""Exact point counts for staircase systems of diagonal-monomial equations over F_q."""

from .counting import CountReport, count_points
from .field import FieldElement, FieldSpec, make_field, primitive_element
from .intlinalg import IntMatrix, SnfDecomposition, smith_normal_form
from .oracle import brute_count, partition_profile
from .parser import load, parse, serialize
from .variety import VarietySpec, validate

__all__ = [
    "CountReport",
    "FieldElement",
    "FieldSpec",
    "IntMatrix",
    "SnfDecomposition",
    "VarietySpec",
    "brute_count",
    "count_points",
    "load",
    "make_field",
    "parse",
    "partition_profile",
    "primitive_element",
    "serialize",
    "smith_normal_form",
    "validate",
]

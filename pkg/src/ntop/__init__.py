"""Exact computation on spaces presented by basic dots: real numbers as
shrinking dyadic intervals, trees of dots, dot-level morphisms, and finitely
branching spaces built from metric presentations."""
from .core import (
    TOP,
    ApartnessWitness,
    ContractViolation,
    DepthExhausted,
    NtopError,
    Point,
    Space,
    StallError,
    UngradedSpace,
    UnsupportedEnumeration,
)

__all__ = [
    "TOP",
    "ApartnessWitness",
    "ContractViolation",
    "DepthExhausted",
    "NtopError",
    "Point",
    "Space",
    "StallError",
    "UngradedSpace",
    "UnsupportedEnumeration",
]

__version__ = "0.1.0"

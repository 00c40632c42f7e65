"""
Models for cochains and Betti reports.
"""

from enum import Enum
from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field


class Theory(str, Enum):
    RACK = "rack"
    QUANDLE = "quandle"


class ComplexSpec(BaseModel):
    theory: Theory = Theory.RACK
    max_degree: int = Field(3, ge=1)


class Cochain(BaseModel):
    """
    A degree-k cochain X^k -> Q.

    values[i] is the value on the i-th tuple of X^k in row-major order,
    x_1 most significant.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int = Field(..., ge=0)
    size: int = Field(..., ge=1)
    values: Tuple[Fraction, ...]

    def value(self, xs: Tuple[int, ...]) -> Fraction:
        index = 0
        for x in xs:
            index = index * self.size + x
        return self.values[index]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


class BettiReport(BaseModel):
    """
    Betti numbers of the full, invariant and complement complexes.

    Attributes:
        rack: Name of the rack
        theory: rack or quandle
        betti: Betti number per degree 1..max_degree
        expected: |pi0|^k (rack) or |pi0|(|pi0|-1)^(k-1) (quandle)
        invariant_betti: Betti numbers of the Inn-invariant subcomplex
        complement_betti: Betti numbers of the (1-P) subcomplex
        match: betti == expected == invariant_betti and complement_betti all zero
    """

    rack: str
    theory: Theory
    betti: List[int]
    expected: List[int]
    invariant_betti: List[int]
    complement_betti: List[int]
    match: bool

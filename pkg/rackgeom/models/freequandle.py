"""
Models for elements of free quandles.
"""

from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# Signed generator indices: +i is g_i, -i its inverse (i >= 1)
FreeWord = Tuple[int, ...]


class FQElement(BaseModel):
    """
    Canonical free quandle element w g_i w^-1.

    Attributes:
        conjugator: Reduced word w not ending in g_i or its inverse
        generator: Generator index i (1-based)
    """

    model_config = ConfigDict(frozen=True)

    conjugator: FreeWord = ()
    generator: int = Field(..., ge=1)

    def key(self) -> Tuple[FreeWord, int]:
        return (self.conjugator, self.generator)


class DistanceBracket(BaseModel):
    """
    Certified bounds on a free quandle distance.

    upper is None when the capped search never met the target.
    """

    model_config = ConfigDict(frozen=True)

    lower: int
    upper: Optional[int] = None
    exact: bool = False
    radius: int
    conj_len: int

"""
Models for connected components and rack metrics.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict


class ComponentDecomposition(BaseModel):
    """
    Partition of a rack into connected components (orbits of Inn).

    Attributes:
        component_of: Component id of each element
        representatives: Smallest element of each component, in id order
        count: Number of components
    """

    model_config = ConfigDict(frozen=True)

    component_of: Tuple[int, ...]
    representatives: Tuple[int, ...]
    count: int

    def members(self, component: int) -> Tuple[int, ...]:
        return tuple(x for x, c in enumerate(self.component_of) if c == component)


class DistanceTable(BaseModel):
    """
    Rack metric per component.

    Attributes:
        representatives: Component representatives, one per matrix
        members: Elements of each component, ascending; indexes the matrix rows
        matrices: One square distance matrix per component
    """

    model_config = ConfigDict(frozen=True)

    representatives: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]
    matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def diameters(self) -> Tuple[int, ...]:
        return tuple(max((max(row) for row in m), default=0) for m in self.matrices)


class MetricQuotientCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    equal: bool
    rack_matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]
    quotient_matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]


class ExtensionCheck(BaseModel):
    """Result of the 1-Lipschitz check for the canonical quandle quotient."""

    model_config = ConfigDict(frozen=True)

    lipschitz: bool
    max_slack: int

"""
Pydantic models for enumerated permutation groups and word norms.
"""

from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr

# images[i] is the image of point i
Permutation = Tuple[int, ...]


class PermGroup(BaseModel):
    """
    A fully enumerated permutation group.

    Attributes:
        degree: Number of points acted on
        generators: Generating permutations
        labels: Label per generator (rack element x for psi_x, else its position)
        elements: All elements in breadth-first order, identity first
        witnesses: Per element, a positive word of generator positions evaluating to it
    """

    model_config = ConfigDict(frozen=True)

    degree: int
    generators: Tuple[Permutation, ...]
    labels: Tuple[int, ...]
    elements: Tuple[Permutation, ...]
    witnesses: Tuple[Tuple[int, ...], ...]

    _index: Dict[Permutation, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, g: Permutation) -> int:
        return self._index[g]

    def contains(self, g: Permutation) -> bool:
        return g in self._index

    def witness_labels(self, g: Permutation) -> Tuple[int, ...]:
        """Witness of g as a word of generator labels."""
        return tuple(self.labels[p] for p in self.witnesses[self._index[g]])


class Subgroup(BaseModel):
    model_config = ConfigDict(frozen=True)

    degree: int
    generators: Tuple[Permutation, ...]
    elements: Tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


class NormTable(BaseModel):
    """
    Word norm on an enumerated group.

    Attributes:
        group: Base group
        generating_set: The set S actually used (its conjugation closure when conjugation_invariant)
        norms: norms[i] is the norm of group.elements[i]
        diameter: Largest norm
        conjugation_invariant: Whether S was closed under conjugation first
    """

    model_config = ConfigDict(frozen=True)

    group: PermGroup
    generating_set: Tuple[Permutation, ...]
    norms: Tuple[int, ...]
    diameter: int
    conjugation_invariant: bool = True

    def norm(self, g: Permutation) -> int:
        return self.norms[self.group.index_of(g)]


class CosetMetric(BaseModel):
    """Quotient word metric on the left cosets G/H."""

    model_config = ConfigDict(frozen=True)

    representatives: Tuple[Permutation, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    diameter: int

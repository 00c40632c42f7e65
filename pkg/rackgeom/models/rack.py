"""
Pydantic models for finite racks and the constructions built from them.
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from rackgeom.models.group import Permutation, PermGroup


class FiniteRack(BaseModel):
    """
    A finite rack given by its operation table.

    Attributes:
        size: Number of elements n
        table: n x n grid with table[x][y] = x > y (row x is the permutation psi_x)
        is_quandle: Whether x > x = x for every x
        name: Optional human readable name used in reports
    """

    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=1)
    table: Tuple[Tuple[int, ...], ...]
    is_quandle: bool
    name: Optional[str] = None

    _inverse: Tuple[Tuple[int, ...], ...] = PrivateAttr(default=())

    def model_post_init(self, __context) -> None:
        inverse = []
        for row in self.table:
            inv = [0] * self.size
            for y, image in enumerate(row):
                inv[image] = y
            inverse.append(tuple(inv))
        self._inverse = tuple(inverse)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def psi(self, x: int) -> Permutation:
        return self.table[x]

    def psi_inverse(self, x: int) -> Permutation:
        return self._inverse[x]

    @property
    def elements(self) -> range:
        return range(self.size)


class CosetRackSpec(BaseModel):
    """
    Input of the coset rack construction (G, S, {H_s}).

    Attributes:
        group: Ambient enumerated permutation group G
        reps: Pairs (s, generators of H_s), one per element of S

    `is_quandle` holds exactly when s lies in H_s for every s.
    """

    model_config = ConfigDict(frozen=True)

    group: PermGroup
    reps: Tuple[Tuple[Permutation, Tuple[Permutation, ...]], ...]

    _is_quandle: bool = PrivateAttr(default=False)

    def model_post_init(self, __context) -> None:
        self._is_quandle = all(
            tuple(s) in _generated(h_gens, self.group.degree) for s, h_gens in self.reps
        )

    @property
    def is_quandle(self) -> bool:
        return self._is_quandle


def _generated(generators: Tuple[Permutation, ...], degree: int) -> set:
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for g in frontier:
            for h in generators:
                product = tuple(g[h[i]] for i in range(degree))
                if product not in seen:
                    seen.add(product)
                    fresh.append(product)
        frontier = fresh
    return seen


class CosetLabel(BaseModel):
    """Element xH_s of a coset rack: index of s and the coset representative x."""

    model_config = ConfigDict(frozen=True)

    rep_index: int
    representative: Permutation


class CosetRack(BaseModel):
    model_config = ConfigDict(frozen=True)

    rack: FiniteRack
    labels: Tuple[CosetLabel, ...]
    subgroups: Tuple[Tuple[Permutation, ...], ...]


class QuandleQuotient(BaseModel):
    """Canonical quandle quotient of a rack together with its projection."""

    model_config = ConfigDict(frozen=True)

    quandle: FiniteRack
    projection: Tuple[int, ...]


class JoyceRepresentation(BaseModel):
    """
    Coset presentation of a rack over its inner automorphism group.

    Attributes:
        spec: (Inn(r), {psi_x_s}, {Stab(x_s)}) with one pair per component
        coset_rack: The coset rack built from spec
        isomorphism: isomorphism[i] is the element of r that coset element i maps to
        representatives: Component representatives x_s
    """

    model_config = ConfigDict(frozen=True)

    spec: CosetRackSpec
    coset_rack: CosetRack
    isomorphism: Tuple[int, ...]
    representatives: Tuple[int, ...]


class EnvelopingAbelianization(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int = Field(..., ge=1)
    component_to_basis: Dict[int, int] = Field(default_factory=dict)


class GroupSpecSeed(BaseModel):
    """
    Parsed group spec file: generators plus optional coset rack data.

    Attributes:
        degree: Number of points
        generators: Generator permutations
        reps: REP lines as (s, H generators or None for the full centralizer)
    """

    degree: int
    generators: List[Permutation]
    reps: List[Tuple[Permutation, Optional[List[Permutation]]]] = Field(default_factory=list)

"""
Permutation group service.

Groups are enumerated by breadth-first closure under right multiplication by
the generators, so every element comes with a positive word witness.
Permutations are tuples of images; compose(a, b) applies b first.
"""

import logging
import re
from collections import deque
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from rackgeom.core.config import settings
from rackgeom.core.errors import (
    GroupTooLarge,
    InvalidArgument,
    NotGenerating,
    NotNormallyGenerating,
)
from rackgeom.models.group import CosetMetric, NormTable, Permutation, PermGroup, Subgroup

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")


def identity(degree: int) -> Permutation:
    return tuple(range(degree))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a o b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def invert(a: Permutation) -> Permutation:
    inverse = [0] * len(a)
    for i, image in enumerate(a):
        inverse[image] = i
    return tuple(inverse)


def conjugate(h: Permutation, g: Permutation) -> Permutation:
    """h g h^-1."""
    return compose(compose(h, g), invert(h))


def is_permutation(images: Sequence[int], degree: int) -> bool:
    return len(images) == degree and sorted(images) == list(range(degree))


def perm_order(a: Permutation) -> int:
    e = identity(len(a))
    power, k = a, 1
    while power != e:
        power = compose(power, a)
        k += 1
    return k


def from_cycles(text: str, degree: int) -> Permutation:
    """
    Parse disjoint-cycle notation over 0-based points, e.g. "(0 1)(2 3)".

    "()" or an empty string is the identity.

    Raises:
        ValueError: On malformed cycles or points out of range
    """
    stripped = text.strip()
    images = list(range(degree))
    if stripped in ("", "()"):
        return tuple(images)
    if _CYCLE.sub("", stripped).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    seen = set()
    for match in _CYCLE.finditer(stripped):
        body = match.group(1).replace(",", " ").split()
        points = [int(p) for p in body]
        for p in points:
            if p < 0 or p >= degree:
                raise ValueError(f"point {p} out of range for degree {degree}")
            if p in seen:
                raise ValueError(f"point {p} appears twice")
            seen.add(p)
        for i, p in enumerate(points):
            images[p] = points[(i + 1) % len(points)]
    return tuple(images)


def to_cycles(a: Permutation) -> str:
    seen = set()
    cycles = []
    for start in range(len(a)):
        if start in seen or a[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        point = a[start]
        while point != start:
            cycle.append(point)
            seen.add(point)
            point = a[point]
        cycles.append("(" + " ".join(str(p) for p in cycle) + ")")
    return "".join(cycles) or "()"


class PermGroupService:
    """Enumeration, norms, cosets and means on finite permutation groups."""

    def generate(
        self,
        degree: int,
        generators: Sequence[Permutation],
        labels: Optional[Sequence[int]] = None,
        cap: Optional[int] = None,
    ) -> PermGroup:
        """
        Enumerate the group generated by the given permutations.

        Args:
            degree: Number of points
            generators: Generating permutations
            labels: Optional label per generator (defaults to positions)
            cap: Largest order allowed (defaults to settings.GROUP_CAP)

        Returns:
            PermGroup: Elements in BFS order with positive-word witnesses

        Raises:
            GroupTooLarge: If the closure exceeds the cap
        """
        cap = settings.GROUP_CAP if cap is None else cap
        gens = tuple(tuple(g) for g in generators)
        for g in gens:
            if not is_permutation(g, degree):
                raise InvalidArgument(f"{g} is not a permutation of {degree} points")
        labels = tuple(labels) if labels is not None else tuple(range(len(gens)))
        if len(labels) != len(gens):
            raise InvalidArgument("one label per generator is required")

        e = identity(degree)
        elements: List[Permutation] = [e]
        witnesses: List[Tuple[int, ...]] = [()]
        index: Dict[Permutation, int] = {e: 0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            g, word = elements[i], witnesses[i]
            for p, a in enumerate(gens):
                h = compose(g, a)
                if h in index:
                    continue
                if len(elements) >= cap:
                    raise GroupTooLarge(f"group order exceeds cap {cap}")
                index[h] = len(elements)
                elements.append(h)
                witnesses.append(word + (p,))
                queue.append(index[h])

        logger.debug(f"Enumerated group of degree {degree} and order {len(elements)}")
        return PermGroup(
            degree=degree,
            generators=gens,
            labels=labels,
            elements=tuple(elements),
            witnesses=tuple(witnesses),
        )

    def inner_group(self, rack, cap: Optional[int] = None) -> PermGroup:
        """Inn(r) generated by the rows psi_x, generator x labelled by x."""
        group = self.generate(
            rack.size,
            [rack.psi(x) for x in rack.elements],
            labels=list(rack.elements),
            cap=cap,
        )
        logger.info(f"Inner automorphism group of {rack.name or 'rack'} has order {group.order}")
        return group

    def evaluate_word(self, group: PermGroup, word: Iterable[int]) -> Permutation:
        """Product of generators at the given positions, leftmost outermost."""
        result = identity(group.degree)
        for p in word:
            result = compose(result, group.generators[p])
        return result

    def subgroup(self, group: PermGroup, generators: Sequence[Permutation]) -> Subgroup:
        """Closure of the generators inside an enumerated group."""
        for g in generators:
            if not group.contains(tuple(g)):
                raise InvalidArgument(f"{to_cycles(tuple(g))} is not an element of the group")
        closure = self.generate(group.degree, generators, cap=group.order)
        return Subgroup(
            degree=group.degree,
            generators=tuple(tuple(g) for g in generators),
            elements=closure.elements,
        )

    def _subgroup_from_elements(self, group: PermGroup, elements: List[Permutation]) -> Subgroup:
        e = identity(group.degree)
        return Subgroup(
            degree=group.degree,
            generators=tuple(g for g in elements if g != e),
            elements=tuple(elements),
        )

    def stabilizer(self, group: PermGroup, point: int) -> Subgroup:
        return self._subgroup_from_elements(
            group, [g for g in group.elements if g[point] == point]
        )

    def centralizer(self, group: PermGroup, g: Permutation) -> Subgroup:
        return self._subgroup_from_elements(
            group, [h for h in group.elements if compose(h, g) == compose(g, h)]
        )

    def conjugation_closed(self, subset: Iterable[Permutation], group: PermGroup) -> bool:
        s = set(subset)
        return all(conjugate(h, g) in s for h in group.generators for g in s)

    def conjugation_closure(
        self, subset: Iterable[Permutation], group: PermGroup
    ) -> Tuple[Permutation, ...]:
        """Smallest conjugation-closed set containing subset, in discovery order."""
        closure: List[Permutation] = []
        seen = set()
        for g in subset:
            g = tuple(g)
            if g not in seen:
                seen.add(g)
                closure.append(g)
        i = 0
        while i < len(closure):
            g = closure[i]
            for h in group.generators:
                c = conjugate(h, g)
                if c not in seen:
                    seen.add(c)
                    closure.append(c)
            i += 1
        return tuple(closure)

    def word_norm(
        self,
        group: PermGroup,
        generating_set: Iterable[Permutation],
        conjugation_invariant: bool = True,
    ) -> NormTable:
        """
        Word norm with respect to S (or its conjugation closure).

        Args:
            group: Enumerated group
            generating_set: The set S
            conjugation_invariant: Replace S by its conjugation closure first

        Returns:
            NormTable: BFS distances from the identity in the Cayley graph

        Raises:
            NotGenerating: If S and its inverses do not generate the group
        """
        s = [tuple(g) for g in generating_set]
        for g in s:
            if not group.contains(g):
                raise InvalidArgument(f"{to_cycles(g)} is not an element of the group")
        if conjugation_invariant:
            s = list(self.conjugation_closure(s, group))
        letters = []
        for g in s + [invert(g) for g in s]:
            if g not in letters:
                letters.append(g)

        norms = [-1] * group.order
        norms[0] = 0
        queue = deque([group.elements[0]])
        reached = 1
        while queue:
            g = queue.popleft()
            d = norms[group.index_of(g)]
            for a in letters:
                h = compose(g, a)
                j = group.index_of(h)
                if norms[j] < 0:
                    norms[j] = d + 1
                    reached += 1
                    queue.append(h)
        if reached < group.order:
            raise NotGenerating(
                f"generating set reaches {reached} of {group.order} elements"
            )
        return NormTable(
            group=group,
            generating_set=tuple(s),
            norms=tuple(norms),
            diameter=max(norms),
            conjugation_invariant=conjugation_invariant,
        )

    def left_cosets(
        self, group: PermGroup, subgroup: Subgroup
    ) -> Tuple[Tuple[Permutation, ...], Dict[Permutation, int]]:
        """
        Left cosets gH in group order.

        Returns:
            Tuple of (representatives, coset index of every group element)
        """
        coset_of: Dict[Permutation, int] = {}
        representatives: List[Permutation] = []
        for g in group.elements:
            if g in coset_of:
                continue
            for h in subgroup.elements:
                coset_of[compose(g, h)] = len(representatives)
            representatives.append(g)
        return tuple(representatives), coset_of

    def quotient_metric(
        self, group: PermGroup, generating_set: Iterable[Permutation], subgroup: Subgroup
    ) -> CosetMetric:
        """
        d(xH, yH) = min over h in H of the conjugation-invariant norm of x^-1 y h.

        Raises:
            NotNormallyGenerating: If the conjugation closure of S does not generate G
        """
        try:
            table = self.word_norm(group, generating_set, conjugation_invariant=True)
        except NotGenerating as e:
            raise NotNormallyGenerating(str(e)) from e

        representatives, _ = self.left_cosets(group, subgroup)
        matrix = []
        for x in representatives:
            x_inv = invert(x)
            row = []
            for y in representatives:
                xy = compose(x_inv, y)
                row.append(min(table.norm(compose(xy, h)) for h in subgroup.elements))
            matrix.append(tuple(row))
        diameter = max((max(r) for r in matrix), default=0)
        return CosetMetric(
            representatives=representatives, matrix=tuple(matrix), diameter=diameter
        )

    def uniform_mean(
        self, group: PermGroup, f: Callable[[Permutation], Fraction]
    ) -> Fraction:
        """Bi-invariant mean (1/|G|) sum f(g)."""
        total = sum((Fraction(f(g)) for g in group.elements), Fraction(0))
        return total / group.order


permgroup_service = PermGroupService()

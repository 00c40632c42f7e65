"""
Rack service: axiom validation, standard constructions, the canonical
quandle quotient, the Joyce coset representation and isomorphism search.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from rackgeom.core.config import settings
from rackgeom.core.errors import (
    InternalInvariantViolation,
    InvalidArgument,
    MalformedGrid,
    NotABijection,
    NotCentralizing,
    SelfDistributivityFails,
)
from rackgeom.models.group import Permutation, PermGroup
from rackgeom.models.rack import (
    CosetLabel,
    CosetRack,
    CosetRackSpec,
    EnvelopingAbelianization,
    FiniteRack,
    JoyceRepresentation,
    QuandleQuotient,
)
from rackgeom.services.permgroup_service import (
    compose,
    invert,
    permgroup_service,
    to_cycles,
)

logger = logging.getLogger(__name__)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smallest element stays the root
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


class RackService:
    """Constructs and validates finite racks."""

    def validate(self, grid: Sequence[Sequence[int]], name: Optional[str] = None) -> FiniteRack:
        """
        Check axioms A0 and A1 and build a FiniteRack.

        Args:
            grid: Square table with grid[x][y] = x > y
            name: Optional name carried into reports

        Returns:
            FiniteRack: With is_quandle set from axiom A2

        Raises:
            MalformedGrid: If the grid is not square or has entries out of range
            NotABijection: If some row is not a permutation
            SelfDistributivityFails: If left self-distributivity fails
        """
        n = len(grid)
        if n == 0:
            raise MalformedGrid("empty table")
        for x, row in enumerate(grid):
            if len(row) != n:
                raise MalformedGrid(f"row {x} has {len(row)} entries, expected {n}")
            for y, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                    raise MalformedGrid(f"entry ({x}, {y}) = {v!r} is not in 0..{n - 1}")
        table = tuple(tuple(row) for row in grid)
        for x, row in enumerate(table):
            if len(set(row)) != n:
                raise NotABijection(x)
        for x in range(n):
            tx = table[x]
            for y in range(n):
                txy = table[tx[y]]
                ty = table[y]
                for z in range(n):
                    if tx[ty[z]] != txy[tx[z]]:
                        raise SelfDistributivityFails(x, y, z)
        is_quandle = all(table[x][x] == x for x in range(n))
        return FiniteRack(size=n, table=table, is_quandle=is_quandle, name=name)

    def trivial(self, n: int) -> FiniteRack:
        self._check_size(n)
        table = tuple(tuple(range(n)) for _ in range(n))
        return FiniteRack(size=n, table=table, is_quandle=True, name=f"trivial({n})")

    def dihedral(self, n: int) -> FiniteRack:
        """Dihedral quandle x > y = 2x - y mod n."""
        self._check_size(n)
        table = tuple(tuple((2 * x - y) % n for y in range(n)) for x in range(n))
        return FiniteRack(size=n, table=table, is_quandle=True, name=f"dihedral({n})")

    def cyclic(self, n: int) -> FiniteRack:
        """Cyclic rack x > y = y + 1 mod n."""
        self._check_size(n)
        table = tuple(tuple((y + 1) % n for y in range(n)) for _ in range(n))
        return FiniteRack(size=n, table=table, is_quandle=(n == 1), name=f"cyclic({n})")

    def product(self, r1: FiniteRack, r2: FiniteRack) -> FiniteRack:
        """Componentwise product; (a, b) is encoded as a * |r2| + b."""
        m = r2.size
        n = r1.size * m
        table = tuple(
            tuple(r1.op(x // m, y // m) * m + r2.op(x % m, y % m) for y in range(n))
            for x in range(n)
        )
        return FiniteRack(
            size=n,
            table=table,
            is_quandle=r1.is_quandle and r2.is_quandle,
            name=f"{r1.name or 'rack'} x {r2.name or 'rack'}",
        )

    def conjugation_quandle(
        self, group: PermGroup, subset: Optional[Sequence[Permutation]] = None
    ) -> FiniteRack:
        """
        Conjugation quandle x > y = x y x^-1 on a conjugation-closed subset.

        Elements are numbered in the order of subset (group order by default).
        """
        elements = [tuple(g) for g in (subset if subset is not None else group.elements)]
        index = {g: i for i, g in enumerate(elements)}
        if len(index) != len(elements):
            raise InvalidArgument("subset has repeated elements")
        table = []
        for x in elements:
            x_inv = invert(x)
            row = []
            for y in elements:
                c = compose(compose(x, y), x_inv)
                if c not in index:
                    raise InvalidArgument("subset is not closed under conjugation by itself")
                row.append(index[c])
            table.append(tuple(row))
        return FiniteRack(size=len(elements), table=tuple(table), is_quandle=True, name="conj")

    def coset_rack(self, spec: CosetRackSpec, name: Optional[str] = None) -> CosetRack:
        """
        Build the coset rack (G, S, {H_s}) with xH_s > yH_t = x s x^-1 y H_t.

        Raises:
            NotCentralizing: If some H_s is not inside the centralizer of s
        """
        group = spec.group
        subgroups = []
        labels: List[CosetLabel] = []
        coset_maps: List[Dict[Permutation, int]] = []
        offset = 0
        for rep_index, (s, h_gens) in enumerate(spec.reps):
            s = tuple(s)
            if not group.contains(s):
                raise InvalidArgument(f"{to_cycles(s)} is not an element of the group")
            h = permgroup_service.subgroup(group, h_gens)
            for element in h.elements:
                if compose(element, s) != compose(s, element):
                    raise NotCentralizing(to_cycles(s), to_cycles(element))
            representatives, coset_of = permgroup_service.left_cosets(group, h)
            subgroups.append(h.elements)
            coset_maps.append({g: offset + c for g, c in coset_of.items()})
            labels.extend(CosetLabel(rep_index=rep_index, representative=r) for r in representatives)
            offset += len(representatives)

        s_list = [tuple(s) for s, _ in spec.reps]
        table = []
        for a in labels:
            x = a.representative
            # left multiplication by x s x^-1
            mover = compose(compose(x, s_list[a.rep_index]), invert(x))
            row = []
            for b in labels:
                row.append(coset_maps[b.rep_index][compose(mover, b.representative)])
            table.append(tuple(row))

        rack = FiniteRack(
            size=len(labels), table=tuple(table), is_quandle=spec.is_quandle, name=name or "coset"
        )
        logger.debug(f"Built coset rack with {rack.size} elements over a group of order {group.order}")
        return CosetRack(rack=rack, labels=tuple(labels), subgroups=tuple(subgroups))

    def canonical_quandle_quotient(self, rack: FiniteRack) -> QuandleQuotient:
        """
        Quotient by x ~ psi_x^m(x); the maximal quandle quotient.

        Raises:
            InternalInvariantViolation: If the induced operation is not well defined
        """
        uf = _UnionFind(rack.size)
        for x in rack.elements:
            y = rack.op(x, x)
            while y != x:
                uf.union(x, y)
                y = rack.op(x, y)
        roots = sorted({uf.find(x) for x in rack.elements})
        class_of = {root: i for i, root in enumerate(roots)}
        projection = tuple(class_of[uf.find(x)] for x in rack.elements)

        m = len(roots)
        table: List[List[Optional[int]]] = [[None] * m for _ in range(m)]
        for x in rack.elements:
            for y in rack.elements:
                px, py, pz = projection[x], projection[y], projection[rack.op(x, y)]
                if table[px][py] is None:
                    table[px][py] = pz
                elif table[px][py] != pz:
                    raise InternalInvariantViolation(
                        f"quotient operation not well defined at ({x}, {y})"
                    )
        quotient = self.validate(table, name=f"quotient of {rack.name or 'rack'}")
        if not quotient.is_quandle:
            raise InternalInvariantViolation("canonical quotient is not a quandle")
        return QuandleQuotient(quandle=quotient, projection=projection)

    def joyce_representation(self, rack: FiniteRack, cap: Optional[int] = None) -> JoyceRepresentation:
        """
        Present the rack as the coset rack (Inn, {psi_x_s}, {Stab(x_s)}).

        The map g Stab(x_s) -> g(x_s) is checked to be a rack isomorphism.
        """
        # local import keeps the geometry -> rack dependency one way
        from rackgeom.services.geometry_service import geometry_service

        group = permgroup_service.inner_group(rack, cap=cap)
        decomposition = geometry_service.components(rack)
        reps = []
        for x in decomposition.representatives:
            s = rack.psi(x)
            stab = permgroup_service.stabilizer(group, x)
            for h in stab.elements:
                if compose(h, s) != compose(s, h):
                    raise InternalInvariantViolation(
                        f"stabilizer of {x} does not centralize psi_{x}"
                    )
            reps.append((s, stab.elements))
        spec = CosetRackSpec(group=group, reps=tuple(reps))
        coset = self.coset_rack(spec, name=f"joyce({rack.name or 'rack'})")

        isomorphism = tuple(
            label.representative[decomposition.representatives[label.rep_index]]
            for label in coset.labels
        )
        if sorted(isomorphism) != list(rack.elements):
            raise InternalInvariantViolation("Joyce map is not a bijection")
        if not self.is_morphism(coset.rack, rack, isomorphism):
            raise InternalInvariantViolation("Joyce map is not a rack morphism")
        return JoyceRepresentation(
            spec=spec,
            coset_rack=coset,
            isomorphism=isomorphism,
            representatives=decomposition.representatives,
        )

    def enveloping_abelianization(self, rack: FiniteRack) -> EnvelopingAbelianization:
        """Abelianizing x > y = x y x^-1 identifies generators along orbits."""
        from rackgeom.services.geometry_service import geometry_service

        decomposition = geometry_service.components(rack)
        return EnvelopingAbelianization(
            rank=decomposition.count,
            component_to_basis={c: c for c in range(decomposition.count)},
        )

    def is_morphism(self, source: FiniteRack, target: FiniteRack, f: Sequence[int]) -> bool:
        if len(f) != source.size or any(not 0 <= v < target.size for v in f):
            return False
        return all(
            f[source.op(x, y)] == target.op(f[x], f[y])
            for x in source.elements
            for y in source.elements
        )

    def is_automorphism(self, rack: FiniteRack, alpha: Sequence[int]) -> bool:
        return sorted(alpha) == list(rack.elements) and self.is_morphism(rack, rack, alpha)

    def psi_conjugation_holds(self, rack: FiniteRack) -> bool:
        """psi_{x>y} = psi_x psi_y psi_x^-1 for all x, y."""
        for x in rack.elements:
            px, px_inv = rack.psi(x), rack.psi_inverse(x)
            for y in rack.elements:
                if rack.psi(rack.op(x, y)) != compose(compose(px, rack.psi(y)), px_inv):
                    return False
        return True

    def find_isomorphism(self, r1: FiniteRack, r2: FiniteRack) -> Optional[Tuple[int, ...]]:
        """
        Backtracking isomorphism search for small racks.

        Raises:
            InvalidArgument: If the racks exceed settings.ISO_SEARCH_MAX
        """
        if max(r1.size, r2.size) > settings.ISO_SEARCH_MAX:
            raise InvalidArgument(
                f"isomorphism search is limited to {settings.ISO_SEARCH_MAX} elements"
            )
        if r1.size != r2.size or r1.is_quandle != r2.is_quandle:
            return None

        def signature(r: FiniteRack, x: int) -> Tuple[int, ...]:
            # cycle type of psi_x plus the fixed flag of x
            seen, lengths = set(), []
            for start in r.elements:
                if start in seen:
                    continue
                length, p = 0, start
                while p not in seen:
                    seen.add(p)
                    p = r.op(x, p)
                    length += 1
                lengths.append(length)
            return tuple(sorted(lengths)) + (int(r.op(x, x) == x),)

        sig1 = [signature(r1, x) for x in r1.elements]
        sig2 = [signature(r2, x) for x in r2.elements]
        if sorted(sig1) != sorted(sig2):
            return None

        n = r1.size
        image = [-1] * n
        used = [False] * n

        def consistent(x: int) -> bool:
            # every pair among the assigned elements 0..x whose product is assigned
            for a in range(x + 1):
                for b in range(x + 1):
                    c = r1.op(a, b)
                    if image[c] >= 0 and image[c] != r2.op(image[a], image[b]):
                        return False
            return True

        def search(x: int) -> bool:
            if x == n:
                return True
            for candidate in r2.elements:
                if used[candidate] or sig2[candidate] != sig1[x]:
                    continue
                image[x], used[candidate] = candidate, True
                if consistent(x) and search(x + 1):
                    return True
                image[x], used[candidate] = -1, False
            return False

        if search(0) and self.is_morphism(r1, r2, image):
            return tuple(image)
        return None

    def _check_size(self, n: int) -> None:
        if n < 1:
            raise InvalidArgument(f"rack size must be at least 1, got {n}")


rack_service = RackService()

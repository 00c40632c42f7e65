"""
Geometry service: connected components, the rack metric and the metric
theorems checked on finite racks.
"""

import logging
from collections import deque
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from rackgeom.core.errors import (
    DifferentComponents,
    InternalInvariantViolation,
    InvalidArgument,
    NotAnAutomorphism,
)
from rackgeom.models.geometry import (
    ComponentDecomposition,
    DistanceTable,
    ExtensionCheck,
    MetricQuotientCheck,
)
from rackgeom.models.rack import CosetRackSpec, FiniteRack

logger = logging.getLogger(__name__)


class GeometryService:
    """Rack metric computations by breadth-first search on the rack's Cayley graph."""

    def components(self, rack: FiniteRack) -> ComponentDecomposition:
        """Orbits of the group generated by all psi_x, ids ordered by smallest element."""
        component_of = [-1] * rack.size
        representatives: List[int] = []
        for start in rack.elements:
            if component_of[start] >= 0:
                continue
            c = len(representatives)
            representatives.append(start)
            component_of[start] = c
            queue = deque([start])
            while queue:
                z = queue.popleft()
                for w in rack.elements:
                    for nxt in (rack.op(w, z), rack.psi_inverse(w)[z]):
                        if component_of[nxt] < 0:
                            component_of[nxt] = c
                            queue.append(nxt)
        return ComponentDecomposition(
            component_of=tuple(component_of),
            representatives=tuple(representatives),
            count=len(representatives),
        )

    def _neighbours(self, rack: FiniteRack) -> List[List[int]]:
        # one BFS step: psi_w or psi_w^-1 for some w
        adjacency = []
        for z in rack.elements:
            nbrs = set()
            for w in rack.elements:
                nbrs.add(rack.op(w, z))
                nbrs.add(rack.psi_inverse(w)[z])
            adjacency.append(sorted(nbrs))
        return adjacency

    def _bfs(self, adjacency: List[List[int]], source: int) -> Dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            z = queue.popleft()
            for nxt in adjacency[z]:
                if nxt not in dist:
                    dist[nxt] = dist[z] + 1
                    queue.append(nxt)
        return dist

    def rack_distance(self, rack: FiniteRack, x: int, y: int) -> int:
        """
        Least number of psi^{+-1} moves taking x to y.

        Raises:
            DifferentComponents: If x and y lie in different components
        """
        dist = self._bfs(self._neighbours(rack), x)
        if y not in dist:
            raise DifferentComponents(f"{x} and {y} lie in different components")
        return dist[y]

    def distance_table(self, rack: FiniteRack) -> DistanceTable:
        decomposition = self.components(rack)
        adjacency = self._neighbours(rack)
        members = [decomposition.members(c) for c in range(decomposition.count)]
        matrices = []
        for component in members:
            rows = []
            for x in component:
                dist = self._bfs(adjacency, x)
                rows.append(tuple(dist[y] for y in component))
            matrices.append(tuple(rows))
        return DistanceTable(
            representatives=decomposition.representatives,
            members=tuple(members),
            matrices=tuple(matrices),
        )

    def component_diameter(self, rack: FiniteRack, component: int) -> int:
        decomposition = self.components(rack)
        if not 0 <= component < decomposition.count:
            raise InvalidArgument(f"no component {component}")
        adjacency = self._neighbours(rack)
        return max(
            max(self._bfs(adjacency, x).values()) for x in decomposition.members(component)
        )

    def all_diameters(self, rack: FiniteRack) -> List[int]:
        return list(self.distance_table(rack).diameters())

    def check_isometry(self, rack: FiniteRack, alpha: Sequence[int]) -> bool:
        """
        Check d(x, y) = d(alpha(x), alpha(y)) on every component.

        Raises:
            NotAnAutomorphism: If alpha is not a rack automorphism
        """
        from rackgeom.services.rack_service import rack_service

        if not rack_service.is_automorphism(rack, alpha):
            raise NotAnAutomorphism(f"{tuple(alpha)} is not an automorphism")
        adjacency = self._neighbours(rack)
        for x in rack.elements:
            dist = self._bfs(adjacency, x)
            moved = self._bfs(adjacency, alpha[x])
            for y, d in dist.items():
                if moved.get(alpha[y]) != d:
                    return False
        return True

    def check_metric_quotient_equality(self, spec: CosetRackSpec) -> MetricQuotientCheck:
        """
        Compare the rack metric on each G/H_s with the quotient word metric.

        The word metric uses the conjugation closure of S = {s}; equality is
        entrywise, not up to bi-Lipschitz equivalence.
        """
        from rackgeom.services.permgroup_service import permgroup_service
        from rackgeom.services.rack_service import rack_service

        coset = rack_service.coset_rack(spec)
        rack = coset.rack
        adjacency = self._neighbours(rack)
        s_set = [tuple(s) for s, _ in spec.reps]

        rack_matrices = []
        quotient_matrices = []
        offset = 0
        for rep_index, (_, h_gens) in enumerate(spec.reps):
            h = permgroup_service.subgroup(spec.group, h_gens)
            metric = permgroup_service.quotient_metric(spec.group, s_set, h)
            size = len(metric.representatives)
            block = range(offset, offset + size)
            rows = []
            for x in block:
                dist = self._bfs(adjacency, x)
                rows.append(tuple(dist.get(y, -1) for y in block))
            rack_matrices.append(tuple(rows))
            quotient_matrices.append(metric.matrix)
            offset += size

        equal = rack_matrices == quotient_matrices
        if not equal:
            logger.error("Rack metric differs from the quotient word metric")
        return MetricQuotientCheck(
            equal=equal,
            rack_matrices=tuple(rack_matrices),
            quotient_matrices=tuple(quotient_matrices),
        )

    def check_extension_lipschitz(self, rack: FiniteRack) -> ExtensionCheck:
        """d([x], [y]) <= d(x, y) for the canonical quandle quotient."""
        from rackgeom.services.rack_service import rack_service

        quotient = rack_service.canonical_quandle_quotient(rack)
        p = quotient.projection
        adjacency = self._neighbours(rack)
        q_adjacency = self._neighbours(quotient.quandle)
        lipschitz, max_slack = True, 0
        for x in rack.elements:
            dist = self._bfs(adjacency, x)
            q_dist = self._bfs(q_adjacency, p[x])
            for y, d in dist.items():
                if p[y] not in q_dist:
                    raise InternalInvariantViolation("projection splits a component")
                slack = d - q_dist[p[y]]
                if slack < 0:
                    lipschitz = False
                max_slack = max(max_slack, slack)
        return ExtensionCheck(lipschitz=lipschitz, max_slack=max_slack)

    def delta_f_defect(
        self, rack: FiniteRack, basepoints: Optional[Sequence[int]] = None
    ) -> Fraction:
        """
        Max |f(y) - f(psi_x(y))| for f = distance to the basepoint of y's component.

        Args:
            rack: Finite rack
            basepoints: One element per component, in component order (defaults
                to the representatives)
        """
        decomposition = self.components(rack)
        if basepoints is None:
            basepoints = decomposition.representatives
        if len(basepoints) != decomposition.count or any(
            decomposition.component_of[b] != c for c, b in enumerate(basepoints)
        ):
            raise InvalidArgument("exactly one basepoint per component is required")
        adjacency = self._neighbours(rack)
        f: Dict[int, int] = {}
        for b in basepoints:
            f.update(self._bfs(adjacency, b))
        return self.quasimorphism_defect(rack, lambda x: Fraction(f[x]))

    def quasimorphism_defect(self, rack: FiniteRack, f: Callable[[int], Fraction]) -> Fraction:
        """Smallest D with |f(y) - f(x > y)| <= D for all x, y."""
        values = [Fraction(f(x)) for x in rack.elements]
        return max(
            (abs(values[y] - values[rack.op(x, y)]) for x in rack.elements for y in rack.elements),
            default=Fraction(0),
        )

    def check_quasimorphism_lipschitz(self, rack: FiniteRack, f: Callable[[int], Fraction]) -> bool:
        """|f(x) - f(y)| <= D d(x, y) on every component, D the defect of f."""
        defect = self.quasimorphism_defect(rack, f)
        values = [Fraction(f(x)) for x in rack.elements]
        adjacency = self._neighbours(rack)
        for x in rack.elements:
            for y, d in self._bfs(adjacency, x).items():
                if abs(values[x] - values[y]) > defect * d:
                    return False
        return True


geometry_service = GeometryService()

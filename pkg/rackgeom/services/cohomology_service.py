"""
Rack and quandle cochain complexes over the rationals.

Cochains of degree k are dense vectors over X^k, tuples ranked row-major
with x_1 most significant. The differential is

    df(x_1..x_{k+1}) = sum_{i=1}^{k} (-1)^{i-1} [ f(.., x_{i-1}, x_{i+1}, ..)
                        - f(.., x_{i-1}, x_i > x_{i+1}, .., x_i > x_{k+1}) ]

The quandle complex is the subcomplex of cochains vanishing on tuples with
two equal adjacent entries; its basis is the non-degenerate tuples.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from rackgeom.core.config import settings
from rackgeom.core.errors import (
    DegenerateValueNonzero,
    DegreeTooLarge,
    InternalInvariantViolation,
    InvalidArgument,
    InvalidDegree,
    NotACocycle,
    NotAnAutomorphism,
    NotAQuandle,
)
from rackgeom.models.cohomology import BettiReport, Cochain, Theory
from rackgeom.models.group import Permutation, PermGroup
from rackgeom.models.linalg import RationalMatrix
from rackgeom.models.rack import FiniteRack
from rackgeom.services.geometry_service import geometry_service
from rackgeom.services.permgroup_service import compose, permgroup_service
from rackgeom.services.rack_service import rack_service
from rackgeom.services.ratlinalg_service import ratlinalg_service

logger = logging.getLogger(__name__)

Tup = Tuple[int, ...]


def rank_tuple(xs: Sequence[int], n: int) -> int:
    index = 0
    for x in xs:
        index = index * n + x
    return index


def is_degenerate(xs: Sequence[int]) -> bool:
    return any(xs[i] == xs[i + 1] for i in range(len(xs) - 1))


class CohomologyService:
    """Differentials, Betti numbers, the Inn-action and the averaging projection."""

    # -- bases and degree checks ---------------------------------------------------

    def basis(self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK) -> List[Tup]:
        tuples = list(product(range(rack.size), repeat=k))
        if Theory(theory) == Theory.QUANDLE:
            tuples = [t for t in tuples if not is_degenerate(t)]
        return tuples

    def _check_theory(self, rack: FiniteRack, theory: Theory) -> Theory:
        theory = Theory(theory)
        if theory == Theory.QUANDLE and not rack.is_quandle:
            raise NotAQuandle(f"{rack.name or 'rack'} is not a quandle; use the rack theory")
        return theory

    def _check_degree(self, rack: FiniteRack, k: int) -> None:
        if k < 1:
            raise InvalidDegree(f"differential degree must be at least 1, got {k}")
        if rack.size ** (k + 1) > settings.MAX_COCHAIN_TUPLES:
            raise DegreeTooLarge(
                f"{rack.size}^{k + 1} tuples exceed the cap {settings.MAX_COCHAIN_TUPLES}"
            )

    # -- cochains ------------------------------------------------------------------

    def zero(self, rack: FiniteRack, k: int) -> Cochain:
        return Cochain.model_construct(
            degree=k, size=rack.size, values=(Fraction(0),) * rack.size ** k
        )

    def cochain(
        self,
        rack: FiniteRack,
        k: int,
        values: Union[Sequence, Callable[[Tup], Fraction]],
    ) -> Cochain:
        """Build a degree-k cochain from a dense vector or a function on tuples."""
        if callable(values):
            vector = tuple(Fraction(values(t)) for t in product(range(rack.size), repeat=k))
        else:
            vector = tuple(Fraction(v) for v in values)
        if len(vector) != rack.size ** k:
            raise InvalidArgument(f"a degree {k} cochain needs {rack.size ** k} values")
        return Cochain.model_construct(degree=k, size=rack.size, values=vector)

    def _matching(self, rack: FiniteRack, f: Cochain) -> None:
        if f.size != rack.size:
            raise InvalidArgument(f"cochain lives on {f.size} points, rack has {rack.size}")

    def coboundary(self, rack: FiniteRack, f: Cochain) -> Cochain:
        """Evaluate df directly on every (k+1)-tuple."""
        self._matching(rack, f)
        k, n = f.degree, rack.size
        if k == 0:
            return self.zero(rack, 1)
        values = f.values
        out = []
        for t in product(range(n), repeat=k + 1):
            total = Fraction(0)
            for i in range(k):
                sign = 1 if i % 2 == 0 else -1
                psi = rack.table[t[i]]
                face = rank_tuple(t[:i] + t[i + 1:], n)
                acted = rank_tuple(t[:i] + tuple(psi[y] for y in t[i + 1:]), n)
                total += sign * (values[face] - values[acted])
            out.append(total)
        return Cochain.model_construct(degree=k + 1, size=n, values=tuple(out))

    def differential_matrix(
        self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK
    ) -> RationalMatrix:
        """
        Matrix of d: C^k -> C^{k+1} acting on column vectors.

        Rows are indexed by the (k+1)-tuple basis and columns by the k-tuple
        basis, both in ranked order. For the quandle theory both bases are
        restricted to non-degenerate tuples and closure of the subcomplex is
        checked while assembling.

        Raises:
            DegreeTooLarge: If n^(k+1) exceeds settings.MAX_COCHAIN_TUPLES
        """
        theory = self._check_theory(rack, theory)
        self._check_degree(rack, k)
        source = self.basis(rack, k, theory)
        index = {t: i for i, t in enumerate(source)}
        quandle = theory == Theory.QUANDLE

        rows: List[Dict[int, Fraction]] = []
        for t in product(range(rack.size), repeat=k + 1):
            row: Dict[int, int] = {}
            for i in range(k):
                sign = 1 if i % 2 == 0 else -1
                psi = rack.table[t[i]]
                for tup, coef in (
                    (t[:i] + t[i + 1:], sign),
                    (t[:i] + tuple(psi[y] for y in t[i + 1:]), -sign),
                ):
                    j = index.get(tup)
                    if j is not None:
                        row[j] = row.get(j, 0) + coef
            row = {j: Fraction(v) for j, v in row.items() if v}
            if quandle and is_degenerate(t):
                if row:
                    raise InternalInvariantViolation(
                        f"quandle subcomplex not closed: d is nonzero at {t}"
                    )
                continue
            rows.append(row)

        matrix = RationalMatrix.model_construct(rows=len(rows), cols=len(source), data=tuple(rows))
        logger.debug(
            f"Assembled d^{k} ({theory.value}) for {rack.name or 'rack'}: "
            f"{matrix.rows}x{matrix.cols}, {matrix.nnz} nonzeros"
        )
        return matrix

    def _ranks(self, rack: FiniteRack, max_degree: int, theory: Theory) -> List[int]:
        """ranks[k] = rank of d^k for k = 0..max_degree, with d^0 = 0."""
        ranks = [0]
        for k in range(1, max_degree + 1):
            ranks.append(ratlinalg_service.rank(self.differential_matrix(rack, k, theory)))
        return ranks

    def betti(self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK) -> int:
        """dim ker d^k - rank d^(k-1)."""
        theory = self._check_theory(rack, theory)
        self._check_degree(rack, k)
        ranks = self._ranks(rack, k, theory)
        return len(self.basis(rack, k, theory)) - ranks[k] - ranks[k - 1]

    def betti_numbers(self, rack: FiniteRack, max_degree: int, theory: Theory = Theory.RACK) -> List[int]:
        """Betti numbers for k = 1..max_degree, each differential ranked once."""
        theory = self._check_theory(rack, theory)
        if max_degree < 1:
            raise InvalidDegree(f"max degree must be at least 1, got {max_degree}")
        self._check_degree(rack, max_degree)
        ranks = self._ranks(rack, max_degree, theory)
        return [
            len(self.basis(rack, k, theory)) - ranks[k] - ranks[k - 1]
            for k in range(1, max_degree + 1)
        ]

    # -- the Inn-action ------------------------------------------------------------

    def act(self, rack: FiniteRack, f: Cochain, alpha: Sequence[int]) -> Cochain:
        """Right action (f.alpha)(x_1..x_k) = f(alpha(x_1)..alpha(x_k))."""
        self._matching(rack, f)
        if not rack_service.is_automorphism(rack, alpha):
            raise NotAnAutomorphism(f"{tuple(alpha)} is not an automorphism")
        n = rack.size
        values = tuple(
            f.values[rank_tuple([alpha[x] for x in t], n)]
            for t in product(range(n), repeat=f.degree)
        )
        return Cochain.model_construct(degree=f.degree, size=n, values=values)

    def _orbits(self, group: PermGroup, tuples: List[Tup]) -> List[List[int]]:
        """Orbits of the diagonal action on a tuple basis, as lists of basis positions."""
        index = {t: i for i, t in enumerate(tuples)}
        orbit_of = [-1] * len(tuples)
        orbits: List[List[int]] = []
        for start in range(len(tuples)):
            if orbit_of[start] >= 0:
                continue
            orbit_id = len(orbits)
            orbit_of[start] = orbit_id
            members = [start]
            i = 0
            while i < len(members):
                t = tuples[members[i]]
                for g in group.generators:
                    j = index[tuple(g[x] for x in t)]
                    if orbit_of[j] < 0:
                        orbit_of[j] = orbit_id
                        members.append(j)
                i += 1
            orbits.append(sorted(members))
        return orbits

    def _restricted_betti(
        self,
        rack: FiniteRack,
        k: int,
        theory: Theory,
        group: Optional[PermGroup],
        invariant: bool,
    ) -> int:
        theory = self._check_theory(rack, theory)
        self._check_degree(rack, k)
        group = group or permgroup_service.inner_group(rack)

        def dimension_and_rank(degree: int) -> Tuple[int, int]:
            tuples = self.basis(rack, degree, theory)
            orbits = self._orbits(group, tuples)
            columns = self.differential_matrix(rack, degree, theory).transpose().data
            images = []
            for orbit in orbits:
                if invariant:
                    image: Dict[int, Fraction] = {}
                    for j in orbit:
                        for r, v in columns[j].items():
                            image[r] = image.get(r, 0) + v
                    images.append(image)
                else:
                    anchor = columns[orbit[0]]
                    for j in orbit[1:]:
                        image = dict(columns[j])
                        for r, v in anchor.items():
                            image[r] = image.get(r, 0) - v
                        images.append(image)
            dim = len(orbits) if invariant else len(tuples) - len(orbits)
            cleaned = ({r: v for r, v in image.items() if v} for image in images)
            return dim, ratlinalg_service.rank_of_vectors(cleaned)

        dim_k, rank_k = dimension_and_rank(k)
        rank_prev = dimension_and_rank(k - 1)[1] if k > 1 else 0
        return dim_k - rank_k - rank_prev

    def invariant_subcomplex_betti(
        self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK, group: Optional[PermGroup] = None
    ) -> int:
        """Betti number of the Inn-invariant subcomplex, spanned by orbit indicators."""
        return self._restricted_betti(rack, k, theory, group, invariant=True)

    def complement_betti(
        self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK, group: Optional[PermGroup] = None
    ) -> int:
        """Betti number of (1-P)C, the cochains summing to zero over every orbit."""
        return self._restricted_betti(rack, k, theory, group, invariant=False)

    def averaging_projection(
        self, rack: FiniteRack, f: Cochain, group: Optional[PermGroup] = None
    ) -> Cochain:
        """P(f)(x_1..x_k) = mean over g in Inn of f(g x_1, .., g x_k)."""
        self._matching(rack, f)
        group = group or permgroup_service.inner_group(rack)
        n = rack.size
        values = []
        for t in product(range(n), repeat=f.degree):
            values.append(
                permgroup_service.uniform_mean(
                    group, lambda g: f.values[rank_tuple([g[x] for x in t], n)]
                )
            )
        return Cochain.model_construct(degree=f.degree, size=n, values=tuple(values))

    # -- explicit primitives -------------------------------------------------------

    def slice(self, f: Cochain, z: int) -> Cochain:
        """f_z(x_1..x_{k-1}) = f(z, x_1..x_{k-1})."""
        if f.degree < 1:
            raise InvalidDegree("cannot slice a degree 0 cochain")
        width = f.size ** (f.degree - 1)
        return Cochain.model_construct(
            degree=f.degree - 1, size=f.size, values=f.values[z * width:(z + 1) * width]
        )

    def primitive_for_translation(
        self, rack: FiniteRack, f: Cochain, word: Sequence[int]
    ) -> Cochain:
        """
        Primitive a with f - f.g = da for g = psi_{x_1} .. psi_{x_m}.

        a = sum_j (f . psi_{x_1} .. psi_{x_{j-1}})_{x_j}; the identity is
        verified exactly before returning.

        Args:
            rack: Finite rack
            f: Cocycle of degree k >= 1
            word: Rack elements x_1..x_m of a positive psi-word

        Raises:
            NotACocycle: If df != 0
        """
        self._matching(rack, f)
        if f.degree < 1:
            raise InvalidDegree("translation primitives need degree at least 1")
        if not self.coboundary(rack, f).is_zero():
            raise NotACocycle("f is not a cocycle")
        for x in word:
            if not 0 <= x < rack.size:
                raise InvalidArgument(f"{x} is not an element of the rack")

        prefix: Permutation = tuple(rack.elements)
        alpha = [Fraction(0)] * rack.size ** (f.degree - 1)
        for x in word:
            translated = self.act(rack, f, prefix)
            for i, v in enumerate(self.slice(translated, x).values):
                alpha[i] += v
            prefix = compose(prefix, rack.psi(x))
        primitive = Cochain.model_construct(degree=f.degree - 1, size=rack.size, values=tuple(alpha))

        moved = self.act(rack, f, prefix)
        difference = tuple(a - b for a, b in zip(f.values, moved.values))
        if self.coboundary(rack, primitive).values != difference:
            raise InternalInvariantViolation("f - f.g is not the coboundary of the primitive")
        return primitive

    def primitive_for_element(
        self, rack: FiniteRack, f: Cochain, group: PermGroup, g: Permutation
    ) -> Cochain:
        """Primitive for an Inn element, via its positive witness word."""
        return self.primitive_for_translation(rack, f, group.witness_labels(tuple(g)))

    # -- pullbacks from pi0 --------------------------------------------------------

    def pi0_pullback(
        self,
        rack: FiniteRack,
        h: Mapping[Tup, Fraction],
        k: int,
        theory: Theory = Theory.RACK,
    ) -> Cochain:
        """
        Pull back h: pi0^k -> Q along the component projection.

        Args:
            h: Values on component-id tuples; missing tuples are zero

        Raises:
            DegenerateValueNonzero: Quandle theory and h is nonzero on a tuple
                with equal adjacent components
        """
        theory = self._check_theory(rack, theory)
        decomposition = geometry_service.components(rack)
        for key, value in h.items():
            if len(key) != k or any(not 0 <= c < decomposition.count for c in key):
                raise InvalidArgument(f"{key} is not a tuple of {k} component ids")
            if theory == Theory.QUANDLE and value != 0 and is_degenerate(key):
                raise DegenerateValueNonzero(f"h{key} = {value} must vanish")
        comp = decomposition.component_of
        f = self.cochain(
            rack, k, lambda t: h.get(tuple(comp[x] for x in t), Fraction(0))
        )
        if not self.coboundary(rack, f).is_zero():
            raise InternalInvariantViolation("pullback from pi0 is not a cocycle")
        return f

    def pullbacks_independent(
        self, rack: FiniteRack, k: int, theory: Theory = Theory.RACK
    ) -> bool:
        """Pullbacks of a basis of Fun(pi0^k) are independent modulo coboundaries."""
        theory = self._check_theory(rack, theory)
        self._check_degree(rack, k)
        count = geometry_service.components(rack).count
        keys = [
            key for key in product(range(count), repeat=k)
            if theory == Theory.RACK or not is_degenerate(key)
        ]
        positions = {t: i for i, t in enumerate(self.basis(rack, k, theory))}

        def coordinates(f: Cochain) -> Dict[int, Fraction]:
            return {
                positions[t]: f.value(t)
                for t in positions
                if f.value(t) != 0
            }

        pulled = [coordinates(self.pi0_pullback(rack, {key: Fraction(1)}, k, theory)) for key in keys]
        if k > 1:
            boundaries = list(self.differential_matrix(rack, k - 1, theory).transpose().data)
        else:
            boundaries = []
        base = ratlinalg_service.rank_of_vectors(boundaries)
        return ratlinalg_service.rank_of_vectors(boundaries + pulled) - base == len(keys)

    def bounded_primitive(self, rack: FiniteRack, f: Cochain) -> Cochain:
        """
        f - h with h the componentwise minimum of f; d(f - h) = df.

        On a finite rack f - h is bounded, so the class of df dies in bounded
        cohomology and the comparison map has trivial kernel in degree 2.
        """
        self._matching(rack, f)
        if f.degree != 1:
            raise InvalidDegree("bounded primitives are defined for degree 1 cochains")
        decomposition = geometry_service.components(rack)
        minima: Dict[int, Fraction] = {}
        for x in rack.elements:
            c = decomposition.component_of[x]
            minima[c] = min(minima.get(c, f.values[x]), f.values[x])
        beta = self.cochain(
            rack, 1, [f.values[x] - minima[decomposition.component_of[x]] for x in rack.elements]
        )
        if self.coboundary(rack, beta).values != self.coboundary(rack, f).values:
            raise InternalInvariantViolation("componentwise constant shift changed df")
        return beta

    # -- the amenability theorem on finite racks -----------------------------------

    def expected_betti(self, components: int, k: int, theory: Theory) -> int:
        if Theory(theory) == Theory.RACK:
            return components ** k
        return components * (components - 1) ** (k - 1)

    def verify_amenable_theorem(
        self, rack: FiniteRack, max_degree: int, theory: Theory = Theory.RACK
    ) -> BettiReport:
        """
        Compare Betti numbers with the count of functions on pi0^k.

        Computes, for k = 1..max_degree, the Betti numbers of the full complex,
        the Inn-invariant subcomplex and its (1-P) complement.
        """
        theory = self._check_theory(rack, theory)
        if max_degree < 1:
            raise InvalidDegree(f"max degree must be at least 1, got {max_degree}")
        self._check_degree(rack, max_degree)
        group = permgroup_service.inner_group(rack)
        components = geometry_service.components(rack).count

        betti = self.betti_numbers(rack, max_degree, theory)
        expected, invariant, complement = [], [], []
        for k in range(1, max_degree + 1):
            expected.append(self.expected_betti(components, k, theory))
            invariant.append(self.invariant_subcomplex_betti(rack, k, theory, group))
            complement.append(self.complement_betti(rack, k, theory, group))

        match = betti == expected and invariant == expected and not any(complement)
        name = rack.name or "rack"
        if match:
            logger.info(f"Betti numbers of {name} ({theory.value}) match: {betti}")
        else:
            logger.warning(
                f"Betti mismatch for {name} ({theory.value}): computed {betti}, expected {expected}"
            )
        return BettiReport(
            rack=name,
            theory=theory,
            betti=betti,
            expected=expected,
            invariant_betti=invariant,
            complement_betti=complement,
            match=match,
        )


cohomology_service = CohomologyService()

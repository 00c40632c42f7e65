"""
Exact rational linear algebra.

Rank uses fraction-free elimination on integer rows: Bareiss on dense
matrices, incremental row reduction with content division on sparse ones.
Kernel bases and solutions come from exact Gauss-Jordan over Fractions.
No floating point is used anywhere in this module.
"""

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Sequence, Tuple

from rackgeom.core.config import settings
from rackgeom.core.errors import InvalidArgument, NoSolution
from rackgeom.models.linalg import RationalMatrix

logger = logging.getLogger(__name__)

IntRow = Dict[int, int]


def _integer_row(row: Dict[int, Fraction]) -> IntRow:
    """Scale a rational row to a primitive integer row."""
    if not row:
        return {}
    denominator = 1
    for v in row.values():
        denominator = lcm(denominator, Fraction(v).denominator)
    scaled = {c: int(Fraction(v) * denominator) for c, v in row.items() if v != 0}
    return _primitive(scaled)


def _primitive(row: IntRow) -> IntRow:
    content = 0
    for v in row.values():
        content = gcd(content, v)
        if content == 1:
            return row
    if content > 1:
        return {c: v // content for c, v in row.items()}
    return row


def _sparse_rank(rows: Iterable[IntRow]) -> int:
    pivots: Dict[int, IntRow] = {}
    for row in sorted(rows, key=len):
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = row
                break
            a, b = pivot[lead], row[lead]
            if abs(b).bit_length() < abs(a).bit_length():
                # keep the smaller pivot, reduce the old one instead
                pivots[lead] = row
                row, pivot = pivot, row
                a, b = b, a
            g = gcd(a, b)
            a, b = a // g, b // g
            reduced = {c: a * v for c, v in row.items()}
            for c, v in pivot.items():
                nv = reduced.get(c, 0) - b * v
                if nv:
                    reduced[c] = nv
                else:
                    reduced.pop(c, None)
            row = _primitive(reduced)
    return len(pivots)


def _bareiss_rank(grid: List[List[int]]) -> int:
    m = [list(r) for r in grid]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank, previous = 0, 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = [r for r in range(rank, n_rows) if m[r][col] != 0]
        if not candidates:
            continue
        best = min(candidates, key=lambda r: abs(m[r][col]).bit_length())
        m[rank], m[best] = m[best], m[rank]
        p = m[rank][col]
        pivot_row = m[rank]
        for r in range(rank + 1, n_rows):
            row = m[r]
            factor = row[col]
            for c in range(col + 1, n_cols):
                row[c] = (p * row[c] - factor * pivot_row[c]) // previous
            row[col] = 0
        previous = p
        rank += 1
    return rank


def _rref(
    rows: Sequence[Dict[int, Fraction]], n_cols: int
) -> Tuple[List[int], List[Dict[int, Fraction]]]:
    """
    Reduced row echelon form.

    Returns:
        Tuple of (pivot columns, reduced pivot rows in the same order)
    """
    work = [{c: Fraction(v) for c, v in r.items() if v != 0} for r in rows]
    work = [r for r in work if r]
    pivot_cols: List[int] = []
    pivot_rows: List[Dict[int, Fraction]] = []
    for col in range(n_cols):
        candidates = [i for i, r in enumerate(work) if r.get(col)]
        if not candidates:
            continue
        best = min(
            candidates,
            key=lambda i: (
                work[i][col].numerator.bit_length() + work[i][col].denominator.bit_length(),
                len(work[i]),
            ),
        )
        row = work.pop(best)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        for target in (work, pivot_rows):
            for i, other in enumerate(target):
                factor = other.get(col)
                if not factor:
                    continue
                updated = dict(other)
                for c, v in row.items():
                    nv = updated.get(c, 0) - factor * v
                    if nv:
                        updated[c] = nv
                    else:
                        updated.pop(c, None)
                target[i] = updated
        work = [r for r in work if r]
        pivot_cols.append(col)
        pivot_rows.append(row)
    return pivot_cols, pivot_rows


class RatLinAlgService:
    """Rank, kernel and solve over the rationals."""

    def rank(self, matrix: RationalMatrix) -> int:
        if matrix.rows == 0 or matrix.cols == 0:
            return 0
        if matrix.density < settings.SPARSE_DENSITY:
            source = matrix if matrix.cols <= matrix.rows else matrix.transpose()
            return self.rank_of_vectors(source.data)
        grid = [[0] * matrix.cols for _ in range(matrix.rows)]
        for i, row in enumerate(matrix.data):
            for c, v in _integer_row(row).items():
                grid[i][c] = v
        return _bareiss_rank(grid)

    def rank_of_vectors(self, vectors: Iterable[Dict[int, Fraction]]) -> int:
        """Dimension of the span of sparse vectors."""
        unique = {}
        for v in vectors:
            row = _integer_row(v)
            if not row:
                continue
            if row[min(row)] < 0:
                row = {c: -x for c, x in row.items()}
            unique.setdefault(tuple(sorted(row.items())), row)
        return _sparse_rank(unique.values())

    def kernel_basis(self, matrix: RationalMatrix) -> List[Tuple[Fraction, ...]]:
        """Basis of {v : Mv = 0}, one vector per free column."""
        pivot_cols, pivot_rows = _rref(matrix.data, matrix.cols)
        pivot_set = set(pivot_cols)
        basis = []
        for free in range(matrix.cols):
            if free in pivot_set:
                continue
            v = [Fraction(0)] * matrix.cols
            v[free] = Fraction(1)
            for col, row in zip(pivot_cols, pivot_rows):
                v[col] = -row.get(free, Fraction(0))
            basis.append(tuple(v))
        return basis

    def solve(self, matrix: RationalMatrix, b: Sequence) -> Tuple[Fraction, ...]:
        """
        One exact solution of Mx = b (free variables set to zero).

        Raises:
            NoSolution: If b is not in the column space
        """
        if len(b) != matrix.rows:
            raise InvalidArgument(f"right-hand side has {len(b)} entries, expected {matrix.rows}")
        augmented = []
        for row, value in zip(matrix.data, b):
            extended = dict(row)
            if value != 0:
                extended[matrix.cols] = Fraction(value)
            augmented.append(extended)
        pivot_cols, pivot_rows = _rref(augmented, matrix.cols + 1)
        if pivot_cols and pivot_cols[-1] == matrix.cols:
            raise NoSolution("system is inconsistent")
        x = [Fraction(0)] * matrix.cols
        for col, row in zip(pivot_cols, pivot_rows):
            x[col] = row.get(matrix.cols, Fraction(0))
        return tuple(x)

    def matmul(self, a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
        if a.cols != b.rows:
            raise InvalidArgument(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
        data = []
        for row in a.data:
            out: Dict[int, Fraction] = {}
            for k, v in row.items():
                for c, w in b.data[k].items():
                    out[c] = out.get(c, 0) + v * w
            data.append({c: v for c, v in out.items() if v != 0})
        return RationalMatrix.model_construct(rows=a.rows, cols=b.cols, data=tuple(data))

    def apply(self, matrix: RationalMatrix, v: Sequence) -> Tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != matrix.cols:
            raise InvalidArgument(f"vector has {len(v)} entries, expected {matrix.cols}")
        return tuple(
            sum((Fraction(x) * v[c] for c, x in row.items()), Fraction(0)) for row in matrix.data
        )


ratlinalg_service = RatLinAlgService()

"""
Exact rational matrix model.
"""

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

Row = Dict[int, Fraction]


class RationalMatrix(BaseModel):
    """
    Rows x cols matrix over the rationals, stored as sparse rows.

    Attributes:
        rows: Number of rows
        cols: Number of columns
        data: data[i] maps column index to a nonzero Fraction
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: int
    cols: int
    data: Tuple[Row, ...]

    @classmethod
    def from_rows(cls, rows: int, cols: int, data: Sequence[Row]) -> "RationalMatrix":
        cleaned = tuple(
            {c: Fraction(v) for c, v in sorted(row.items()) if v != 0} for row in data
        )
        if len(cleaned) != rows:
            raise ValueError(f"expected {rows} rows, got {len(cleaned)}")
        for row in cleaned:
            if row and (min(row) < 0 or max(row) >= cols):
                raise ValueError("column index out of range")
        return cls.model_construct(rows=rows, cols=cols, data=cleaned)

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence]) -> "RationalMatrix":
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        return cls.from_rows(rows, cols, [{c: v for c, v in enumerate(r)} for r in grid])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls.model_construct(rows=rows, cols=cols, data=tuple({} for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.model_construct(
            rows=n, cols=n, data=tuple({i: Fraction(1)} for i in range(n))
        )

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    @property
    def density(self) -> float:
        if self.rows == 0 or self.cols == 0:
            return 0.0
        return self.nnz / (self.rows * self.cols)

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i].get(j, Fraction(0))

    def to_dense(self) -> List[List[Fraction]]:
        return [[row.get(c, Fraction(0)) for c in range(self.cols)] for row in self.data]

    def transpose(self) -> "RationalMatrix":
        columns: List[Row] = [{} for _ in range(self.cols)]
        for i, row in enumerate(self.data):
            for j, v in row.items():
                columns[j][i] = v
        return RationalMatrix.model_construct(rows=self.cols, cols=self.rows, data=tuple(columns))

    def is_zero(self) -> bool:
        return all(not row for row in self.data)

    def debug_format(self) -> str:
        """Plain-text dump, one row per line."""
        lines = [f"# {self.rows}x{self.cols}"]
        for row in self.to_dense():
            lines.append(" ".join(str(v) for v in row))
        return "\n".join(lines)

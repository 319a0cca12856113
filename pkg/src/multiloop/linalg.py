"""Exact rational linear algebra on sparse rows.

Matrices are passed around as lists of sparse rows (``dict[int, Fraction]``) and
reduced with sympy's sparse domain matrices over ``QQ``.
"""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

SparseRow = dict[int, Fraction]


def _to_qq(value: Fraction) -> object:
  return QQ(value.numerator, value.denominator)


def _from_qq(value: object) -> Fraction:
  return Fraction(int(value.numerator), int(value.denominator))  # type: ignore[attr-defined]


def to_sdm(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> SDM:
  """Build an SDM over QQ from sparse rows, dropping zero entries."""
  data: dict[int, dict[int, object]] = {}
  for i, row in enumerate(rows):
    entries = {j: _to_qq(v) for j, v in row.items() if v}
    if entries:
      data[i] = entries
  return SDM(data, (len(rows), ncols), QQ)


@dataclass(frozen=True)
class RowEchelon:
  """Reduced row echelon form of a matrix.

  ``rows[i]`` has a leading 1 in column ``pivots[i]`` and zeros in every other pivot
  column.
  """

  rows: tuple[SparseRow, ...]
  pivots: tuple[int, ...]
  ncols: int

  @property
  def rank(self) -> int:
    return len(self.pivots)

  def nullspace(self) -> list[SparseRow]:
    """Basis of the kernel, one vector per non-pivot column."""
    pivot_set = set(self.pivots)
    basis: list[SparseRow] = []
    for free in range(self.ncols):
      if free in pivot_set:
        continue
      vector: SparseRow = {free: Fraction(1)}
      for row, pivot in zip(self.rows, self.pivots, strict=True):
        value = row.get(free)
        if value:
          vector[pivot] = -value
      basis.append(vector)
    return basis

  def coordinates(self, vector: Mapping[int, Fraction]) -> SparseRow:
    """Apply the echelon rows to a column vector."""
    out: SparseRow = {}
    for i, row in enumerate(self.rows):
      total = sum((value * vector.get(j, 0) for j, value in row.items()), Fraction(0))
      if total:
        out[i] = total
    return out


def row_echelon(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> RowEchelon:
  """Reduce ``rows`` to reduced row echelon form."""
  if not rows or ncols == 0:
    return RowEchelon(rows=(), pivots=(), ncols=ncols)
  reduced, _ = to_sdm(rows, ncols).rref()
  leading: list[tuple[int, SparseRow]] = []
  for row in reduced.values():
    sparse = {j: _from_qq(v) for j, v in row.items() if v}
    if sparse:
      leading.append((min(sparse), sparse))
  leading.sort(key=lambda item: item[0])
  return RowEchelon(
    rows=tuple(row for _, row in leading),
    pivots=tuple(pivot for pivot, _ in leading),
    ncols=ncols,
  )


def rank(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> int:
  return row_echelon(rows, ncols).rank


def nullspace(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> list[SparseRow]:
  return row_echelon(rows, ncols).nullspace()


def dense(rows: Sequence[Sequence[Fraction]]) -> list[SparseRow]:
  """Convert dense rows to the sparse row format."""
  return [{j: Fraction(v) for j, v in enumerate(row) if v} for row in rows]


def solve_unique(
  rows: Sequence[Mapping[int, Fraction]], ncols: int, rhs: Sequence[Fraction]
) -> list[Fraction] | None:
  """Solve a square nonsingular system; None when it is singular."""
  augmented = [dict(row) for row in rows]
  for i, value in enumerate(rhs):
    if value:
      augmented[i][ncols] = Fraction(value)
  echelon = row_echelon(augmented, ncols + 1)
  if echelon.rank != ncols or (echelon.pivots and echelon.pivots[-1] == ncols):
    return None
  return [row.get(ncols, Fraction(0)) for row in echelon.rows]

"""Cartan matrix builders, registered per Dynkin series."""

from typing import Callable

from multiloop.errors import DataError
from multiloop.models import Series

CartanMatrix = tuple[tuple[int, ...], ...]
CartanBuilder = Callable[[int], CartanMatrix]


class RootSystemError(DataError):
  """Invalid or unsupported (series, rank) pair."""


_builders: dict[Series, CartanBuilder] = {}


def register_series(series: Series, builder: CartanBuilder) -> None:
  """Register the Cartan matrix builder for a series.

  Args:
    series: Dynkin series handled by the builder.
    builder: Callable taking the rank and returning the Cartan matrix. It raises
      RootSystemError for ranks the series does not have.
  """
  _builders[series] = builder


def get_cartan_matrix(series: Series, rank: int) -> CartanMatrix:
  """Return the Cartan matrix of a registered series."""
  if series not in _builders:
    available = ", ".join(s.value for s in _builders) or "none"
    raise RootSystemError(
      f"Series '{series.value}' is not supported. Available: {available}"
    )
  if rank < 1:
    raise RootSystemError(f"Rank must be positive, got {rank}")
  return _builders[series](rank)


def list_series() -> list[Series]:
  return list(_builders)


def _from_edges(rank: int, edges: list[tuple[int, int]]) -> CartanMatrix:
  rows = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
  for i, j in edges:
    rows[i][j] = -1
    rows[j][i] = -1
  return tuple(tuple(row) for row in rows)


def _cartan_a(rank: int) -> CartanMatrix:
  return _from_edges(rank, [(i, i + 1) for i in range(rank - 1)])


def _cartan_d(rank: int) -> CartanMatrix:
  if rank < 4:
    raise RootSystemError(f"D_{rank} is not a simple type (need rank >= 4)")
  edges = [(i, i + 1) for i in range(rank - 2)]
  edges.append((rank - 3, rank - 1))
  return _from_edges(rank, edges)


def _cartan_e(rank: int) -> CartanMatrix:
  if rank not in (6, 7, 8):
    raise RootSystemError(f"E_{rank} is not a simple type (need rank 6, 7 or 8)")
  # Bourbaki labelling: 1-3-4-5-6-7-8 with 2 attached to 4.
  edges = [(0, 2), (1, 3), (2, 3)]
  edges.extend((i, i + 1) for i in range(3, rank - 1))
  return _from_edges(rank, edges)


register_series(Series.A, _cartan_a)
register_series(Series.D, _cartan_d)
register_series(Series.E, _cartan_e)

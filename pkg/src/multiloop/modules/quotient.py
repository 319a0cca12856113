"""Quotients of induced modules by the radical of the contravariant form.

The radical of a block is the kernel of its Gram matrix. With ``R`` the reduced row
echelon form of the Gram matrix, ``v ↦ R v`` has kernel exactly the radical, so the
pivot keys represent a basis of the quotient block and ``R`` gives coordinates in it.
"""

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from multiloop.algebra.loop_algebra import LoopGenerator
from multiloop.linalg import RowEchelon, SparseRow, row_echelon
from multiloop.modules.base import (
  BlockKey,
  BoxOverflowError,
  GradedModule,
  Key,
  Terms,
  add_into,
)
from multiloop.modules.induced import InducedModule


@dataclass(frozen=True)
class QuotientBlock:
  """One block of the quotient: its Gram matrix, echelon form and representatives."""

  block: BlockKey
  keys: tuple[Key, ...]
  gram: list[SparseRow]
  echelon: RowEchelon

  @property
  def representatives(self) -> tuple[Key, ...]:
    return tuple(self.keys[p] for p in self.echelon.pivots)

  @property
  def rank(self) -> int:
    return self.echelon.rank

  @property
  def radical_dimension(self) -> int:
    return len(self.keys) - self.rank

  def radical(self) -> list[Terms]:
    """Basis of the radical as vectors over the block keys."""
    return [
      {self.keys[j]: v for j, v in vector.items()} for vector in self.echelon.nullspace()
    ]

  def project(self, terms: Mapping[Key, Fraction]) -> Terms:
    index = {key: i for i, key in enumerate(self.keys)}
    column: SparseRow = {}
    for key, value in terms.items():
      if key not in index:
        raise BoxOverflowError(f"{key!r} lies outside the truncated block {self.block}")
      column[index[key]] = value
    reps = self.representatives
    return {reps[i]: v for i, v in self.echelon.coordinates(column).items()}


class QuotientModule(GradedModule):
  """``M / Rad⟨·,·⟩`` of an induced module, computed block by block inside the box."""

  def __init__(self, induced: InducedModule, name: str | None = None):
    self.induced = induced
    self.config = induced.config
    self.box = induced.box
    self.name = name or f"Q({induced.name})"
    self._quotients: dict[BlockKey, QuotientBlock] = {}
    self._actions: dict[tuple[LoopGenerator, Key], Terms] = {}

  def quotient_block(self, block: BlockKey) -> QuotientBlock:
    cached = self._quotients.get(block)
    if cached is not None:
      return cached
    keys = self.induced.block_basis(block)
    gram = self.induced.gram(block)
    result = QuotientBlock(block, keys, gram, row_echelon(gram, len(keys)))
    self._quotients[block] = result
    return result

  def project(self, terms: Mapping[Key, Fraction]) -> Terms:
    """Image in the quotient of a vector of the induced module."""
    grouped: dict[BlockKey, Terms] = {}
    for key, value in terms.items():
      grouped.setdefault(self.induced.block_of(key), {})[key] = value
    out: Terms = {}
    for block in sorted(grouped):
      for key, value in self.quotient_block(block).project(grouped[block]).items():
        add_into(out, key, value)
    return out

  def block_of(self, key: Key) -> BlockKey:
    return self.induced.block_of(key)

  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    return self.quotient_block(block).representatives

  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    return tuple(b for b in self.induced.in_box_blocks() if self.quotient_block(b).rank)

  def top_blocks(self) -> tuple[BlockKey, ...]:
    induced = self.induced
    return tuple(
      b
      for b in induced.in_box_blocks()
      if induced.block_depth(b) == 0 and self.quotient_block(b).rank
    )

  def unreduced(self) -> InducedModule:
    return self.induced

  def depth(self, key: Key) -> int:
    return self.induced.depth(key)

  def base_depth(self, key: Key) -> int:
    return self.induced.base_depth(key)

  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    memo_key = (generator, key)
    cached = self._actions.get(memo_key)
    if cached is None:
      cached = self.project(self.induced.act_loop(generator, key))
      self._actions[memo_key] = cached
    return cached

  def pair_keys(self, left: Key, right: Key) -> Fraction:
    return self.induced.pair_keys(left, right)

  def block_table(self) -> list[QuotientBlock]:
    """Quotient data for every in-box block of the induced module."""
    return [self.quotient_block(b) for b in self.induced.in_box_blocks()]

"""Modules derived from others: grading shifts and direct sums."""

from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import cast

from multiloop.algebra.loop_algebra import LoopGenerator
from multiloop.modules.base import BlockKey, GradedModule, Key, ModuleError


class ShiftedModule(GradedModule):
  """``M(m⃗)``: ``d_i`` acts by its eigenvalue on ``M`` plus ``m_i``.

  Keys and the action of loop generators are those of the inner module.
  """

  def __init__(self, inner: GradedModule, shift: Sequence[int]):
    if len(shift) != inner.config.k:
      raise ModuleError(f"Shift {tuple(shift)} has length {len(shift)}, expected {inner.config.k}")
    self.inner = inner
    self.shift = tuple(shift)
    self.config = inner.config
    self.box = inner.box
    self.name = f"{inner.name}{self.shift}"

  def _move(self, degrees: tuple[int, ...], sign: int) -> tuple[int, ...]:
    return tuple(d + sign * m for d, m in zip(degrees, self.shift, strict=True))

  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    return self.inner.act_loop(generator, key)

  def pair_keys(self, left: Key, right: Key) -> Fraction:
    return self.inner.pair_keys(left, right)

  def block_of(self, key: Key) -> BlockKey:
    degrees, weight = self.inner.block_of(key)
    return self._move(degrees, 1), weight

  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    degrees, weight = block
    return self.inner.block_basis((self._move(degrees, -1), weight))

  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    return tuple((self._move(d, 1), w) for d, w in self.inner.in_box_blocks())

  def top_blocks(self) -> tuple[BlockKey, ...]:
    return tuple((self._move(d, 1), w) for d, w in self.inner.top_blocks())

  def depth(self, key: Key) -> int:
    return self.inner.depth(key)

  def base_depth(self, key: Key) -> int:
    return self.inner.base_depth(key)


class DirectSumModule(GradedModule):
  """``A ⊕ B`` with keys ``(0, a)`` and ``(1, b)``; the two summands are orthogonal."""

  def __init__(self, first: GradedModule, second: GradedModule):
    if first.config != second.config:
      raise ModuleError("Summands must be modules over the same algebra")
    self.parts = (first, second)
    self.config = first.config
    self.box = first.box
    self.name = f"{first.name} ⊕ {second.name}"

  def _split(self, key: Key) -> tuple[int, Key]:
    return cast(tuple[int, Key], key)

  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    part, inner = self._split(key)
    return {(part, image): v for image, v in self.parts[part].act_loop(generator, inner).items()}

  def pair_keys(self, left: Key, right: Key) -> Fraction:
    (a, x), (b, y) = self._split(left), self._split(right)
    return self.parts[a].pair_keys(x, y) if a == b else Fraction(0)

  def block_of(self, key: Key) -> BlockKey:
    part, inner = self._split(key)
    return self.parts[part].block_of(inner)

  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    return tuple((i, key) for i, part in enumerate(self.parts) for key in part.block_basis(block))

  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    blocks = set(self.parts[0].in_box_blocks()) | set(self.parts[1].in_box_blocks())
    return tuple(sorted(blocks, key=lambda b: (self.block_depth(b), b)))

  def depth(self, key: Key) -> int:
    part, inner = self._split(key)
    return self.parts[part].depth(inner)

  def base_depth(self, key: Key) -> int:
    part, inner = self._split(key)
    return self.parts[part].base_depth(inner)

"""Graded module interface shared by Weyl, induced, quotient and derived modules.

A module exposes a basis of hashable keys grouped into finite blocks. A block is the
pair (eigenvalues of ``d_1..d_k``, weight in fundamental coordinates). Vectors are
finite maps from keys to rationals.
"""

from abc import ABC, abstractmethod
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from multiloop.algebra.loop_algebra import (
  AlgebraConfig,
  CentralGenerator,
  DerivationGenerator,
  Generator,
  LoopElement,
  LoopGenerator,
)
from multiloop.errors import DataError
from multiloop.linalg import SparseRow

Key = Hashable
Weight = tuple[int, ...]
BlockKey = tuple[tuple[int, ...], Weight]
Terms = dict[Key, Fraction]


class ModuleError(DataError):
  """Invalid module data or a precondition of a module operation failed."""


class BoxOverflowError(DataError):
  """A result left the truncation box."""


@dataclass(frozen=True)
class TruncationBox:
  """``depth``: allowed ``d_k`` depths ``0..N``; ``lateral``: ``|n_i| <= B`` for ``i < k``."""

  depth: int
  lateral: int = 0

  def __post_init__(self) -> None:
    if self.depth < 0 or self.lateral < 0:
      raise ModuleError(f"Truncation bounds must be non-negative, got {self}")


def add_into(target: Terms, key: Key, value: Fraction) -> None:
  total = target.get(key, Fraction(0)) + value
  if total:
    target[key] = total
  else:
    target.pop(key, None)


class GradedModule(ABC):
  """A graded module over ``ĝ_k`` (or ``g`` when ``k = 0``) with finite blocks."""

  config: AlgebraConfig
  box: TruncationBox
  name: str = "module"

  @abstractmethod
  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    """Action of a loop generator on a basis key."""
    ...

  @abstractmethod
  def pair_keys(self, left: Key, right: Key) -> Fraction:
    """Contravariant form on basis keys."""
    ...

  @abstractmethod
  def block_of(self, key: Key) -> BlockKey:
    ...

  @abstractmethod
  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    ...

  @abstractmethod
  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    ...

  @abstractmethod
  def depth(self, key: Key) -> int:
    """``d_k`` depth below the top of the module."""
    ...

  def base_depth(self, key: Key) -> int:
    """Depth of the base component of a key (``t_{k-1}`` degree below its top)."""
    raise ModuleError(f"{self.name} has no base module")

  def degrees(self, key: Key) -> tuple[int, ...]:
    return self.block_of(key)[0]

  def act_key(self, generator: Generator, key: Key) -> Mapping[Key, Fraction]:
    if isinstance(generator, CentralGenerator):
      return {key: self.config.level(generator.i)}
    if isinstance(generator, DerivationGenerator):
      value = self.degrees(key)[generator.i - 1]
      return {key: Fraction(value)} if value else {}
    return self.act_loop(generator, key)

  def act_terms(self, generator: Generator, terms: Mapping[Key, Fraction]) -> Terms:
    out: Terms = {}
    for key, value in terms.items():
      for image, c in self.act_key(generator, key).items():
        add_into(out, image, value * c)
    return out

  def act(self, element: Generator | LoopElement, vector: "ModuleVector") -> "ModuleVector":
    """Apply a Lie algebra element to a vector."""
    items = element.terms.items() if isinstance(element, LoopElement) else [(element, Fraction(1))]
    out: Terms = {}
    for generator, coefficient in items:
      for key, value in self.act_terms(generator, vector.terms).items():
        add_into(out, key, coefficient * value)
    return ModuleVector(self, out)

  def act_word(self, word: Sequence[Generator], vector: "ModuleVector") -> "ModuleVector":
    """Apply ``y_1 ⋯ y_n``: the rightmost factor acts first."""
    terms: Terms = dict(vector.terms)
    for generator in reversed(word):
      terms = self.act_terms(generator, terms)
    return ModuleVector(self, terms)

  def pair(self, left: "ModuleVector", right: "ModuleVector") -> Fraction:
    total = Fraction(0)
    for a, u in left.terms.items():
      block = self.block_of(a)
      for b, w in right.terms.items():
        if self.block_of(b) == block:
          total += u * w * self.pair_keys(a, b)
    return total

  def vector(self, terms: Mapping[Key, Fraction | int]) -> "ModuleVector":
    return ModuleVector(self, {key: Fraction(v) for key, v in terms.items()})

  def basis_vector(self, key: Key) -> "ModuleVector":
    return ModuleVector(self, {key: Fraction(1)})

  def block_depth(self, block: BlockKey) -> int:
    basis = self.block_basis(block)
    if basis:
      return self.depth(basis[0])
    degrees, _ = block
    return -degrees[-1] if degrees else 0

  def shift_block(self, block: BlockKey, generator: LoopGenerator) -> BlockKey:
    degrees, weight = block
    data = self.config.root_system
    moved = tuple(d + n for d, n in zip(degrees, generator.power, strict=True))
    root = data.weight_of(generator.element)
    return moved, tuple(w + r for w, r in zip(weight, root, strict=True))

  def in_box_generators(self) -> list[LoopGenerator]:
    """Loop generators with ``|n_i| <= lateral`` for ``i < k`` and ``|n_k| <= depth``."""
    k = self.config.k
    lateral = range(-self.box.lateral, self.box.lateral + 1)
    ranges = [lateral] * (k - 1) + ([range(-self.box.depth, self.box.depth + 1)] if k else [])
    return [
      LoopGenerator(x, power)
      for x in range(self.config.root_system.dim)
      for power in product(*ranges)
    ]

  def is_raising(self, generator: LoopGenerator) -> bool:
    """Generators that strictly lower the depth."""
    if self.config.k:
      return generator.power[-1] > 0
    data = self.config.root_system
    return not data.is_cartan(generator.element) and sum(data.root_of(generator.element)) > 0

  def coordinates(self, terms: Mapping[Key, Fraction], block: BlockKey) -> SparseRow:
    index = {key: i for i, key in enumerate(self.block_basis(block))}
    out: SparseRow = {}
    for key, value in terms.items():
      if key not in index:
        raise BoxOverflowError(f"{key!r} lies outside the truncated block {block}")
      out[index[key]] = value
    return out

  def matrix(
    self, generator: LoopGenerator, block: BlockKey
  ) -> tuple[BlockKey, list[SparseRow]] | None:
    """Columns of ``generator`` restricted to a block, or None when an image leaves the box."""
    target = self.shift_block(block, generator)
    columns = []
    try:
      for key in self.block_basis(block):
        columns.append(self.coordinates(self.act_key(generator, key), target))
    except BoxOverflowError:
      return None
    return target, columns

  def top_blocks(self) -> tuple[BlockKey, ...]:
    """In-box blocks of depth 0."""
    return tuple(b for b in self.in_box_blocks() if self.block_depth(b) == 0)

  def unreduced(self) -> "GradedModule":
    """The module whose keys and pairing this one reuses; itself unless it is a quotient."""
    return self

  def in_box_keys(self) -> Iterator[Key]:
    for block in self.in_box_blocks():
      yield from self.block_basis(block)

  def dimension(self) -> int:
    """Number of in-box basis vectors."""
    return sum(len(self.block_basis(block)) for block in self.in_box_blocks())


@dataclass(frozen=True, eq=False)
class ModuleVector:
  """A finite combination of basis keys of a module."""

  module: GradedModule
  terms: Terms

  def __post_init__(self) -> None:
    object.__setattr__(self, "terms", {key: v for key, v in self.terms.items() if v})

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, ModuleVector):
      return NotImplemented
    return self.module is other.module and self.terms == other.terms

  def __hash__(self) -> int:
    return hash((id(self.module), frozenset(self.terms.items())))

  def __add__(self, other: "ModuleVector") -> "ModuleVector":
    out = dict(self.terms)
    for key, value in other.terms.items():
      add_into(out, key, value)
    return ModuleVector(self.module, out)

  def __neg__(self) -> "ModuleVector":
    return ModuleVector(self.module, {key: -v for key, v in self.terms.items()})

  def __sub__(self, other: "ModuleVector") -> "ModuleVector":
    return self + (-other)

  def __rmul__(self, scalar: Fraction | int) -> "ModuleVector":
    return ModuleVector(self.module, {key: Fraction(scalar) * v for key, v in self.terms.items()})

  @property
  def is_zero(self) -> bool:
    return not self.terms

  @property
  def depth(self) -> int:
    """Largest depth of a component; zero for the zero vector."""
    return max((self.module.depth(key) for key in self.terms), default=0)

  def depth_components(self) -> dict[int, "ModuleVector"]:
    """Split into ``d_k`` eigencomponents, keyed by depth."""
    parts: dict[int, Terms] = {}
    for key, value in self.terms.items():
      parts.setdefault(self.module.depth(key), {})[key] = value
    return {i: ModuleVector(self.module, parts[i]) for i in sorted(parts)}


class HighestWeightLine(GradedModule):
  """One-dimensional module of the Borel subalgebra: ``h`` acts by ``λ(h)``, ``n⁺`` by zero."""

  KEY: Key = ()

  def __init__(self, config: AlgebraConfig, weight: Sequence[int]):
    if config.k != 0:
      raise ModuleError("A highest-weight line lives at k = 0")
    data = config.root_system
    if len(weight) != data.rank:
      raise ModuleError(f"Weight {tuple(weight)} has length {len(weight)}, expected {data.rank}")
    self.config = config
    self.box = TruncationBox(depth=0)
    self.weight = tuple(weight)
    self.name = f"C_{self.weight}"
    # λ(h_i) = Σ_j (A⁻¹)_ij λ_j since h_i is dual to the simple roots.
    self._cartan_values = tuple(
      sum((data.form_matrix[i][j] * self.weight[j] for j in range(data.rank)), Fraction(0))
      for i in range(data.rank)
    )

  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    data = self.config.root_system
    if data.is_cartan(generator.element):
      value = self._cartan_values[generator.element]
      return {key: value} if value else {}
    if sum(data.root_of(generator.element)) > 0:
      return {}
    raise ModuleError(f"{self.config.label(generator)} does not act on {self.name}")

  def pair_keys(self, left: Key, right: Key) -> Fraction:
    return Fraction(1)

  def block_of(self, key: Key) -> BlockKey:
    return (), self.weight

  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    return (self.KEY,) if block == ((), self.weight) else ()

  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    return (((), self.weight),)

  def depth(self, key: Key) -> int:
    return 0

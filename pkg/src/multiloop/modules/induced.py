"""Induced modules ``U(ĝ_k) ⊗_{U(ĝ_k⁺)} M`` and Verma modules of ``g``.

Basis keys are ``(word, base_key)`` with ``word`` an ordered PBW monomial in the lowering
generators: ``ĝ_k⁻`` for ``k >= 1`` and ``n⁻`` for ``k = 0``. A raising generator ``a``
is commuted to the right, ``a · x_1 ⋯ x_n ⊗ b = x_1 · (a · x_2 ⋯ x_n ⊗ b) + [a, x_1] ·
x_2 ⋯ x_n ⊗ b``, until it reaches the base, where ``g ⊗ t_k^{>0}`` acts by zero and
``g ⊗ t^{(n', 0)}`` acts through the base module. The action itself is exact; only block
enumeration is truncated, by the box.
"""

from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from itertools import product
from typing import cast

from multiloop.algebra.loop_algebra import AlgebraConfig, LoopGenerator, anti_involution_generator
from multiloop.enveloping import PBWAlgebra, PBWElement, Word, lowering_algebra, minus_algebra
from multiloop.modules.base import (
  BlockKey,
  GradedModule,
  HighestWeightLine,
  Key,
  ModuleError,
  Terms,
  TruncationBox,
  Weight,
  add_into,
)

InducedKey = tuple[Word, Key]


class InducedModule(GradedModule):
  """``Ind^k_{k-1}`` of a level ``k-1`` module, with lazily enumerated blocks."""

  def __init__(self, base: GradedModule, config: AlgebraConfig, box: TruncationBox):
    finite = config.k == 0 and isinstance(base, HighestWeightLine)
    if config.k != base.config.k + 1 and not finite:
      raise ModuleError(f"Cannot induce a k={base.config.k} module to k={config.k}")
    if config.root_system is not base.config.root_system or config.p != base.config.p:
      raise ModuleError("Base module and induced module use different algebras")
    self.base = base
    self.config = config
    self.box = box
    self.name = f"Ind^{config.k}({base.name})"
    self.lowering: PBWAlgebra = minus_algebra(config) if config.k else lowering_algebra(config)
    self._actions: dict[tuple[LoopGenerator, InducedKey], Terms] = {}
    self._lifted_actions: dict[tuple[LoopGenerator, InducedKey], Terms] = {}
    self._blocks: dict[BlockKey, tuple[InducedKey, ...]] = {}
    self._pairs: dict[tuple[InducedKey, InducedKey], Fraction] = {}
    self._generators: dict[int, list[LoopGenerator]] = {}

  # -- generators ---------------------------------------------------------------

  def is_lowering(self, generator: LoopGenerator) -> bool:
    return self.lowering.member(generator)

  def size(self, generator: LoopGenerator) -> int:
    """Contribution of a lowering generator to the depth."""
    if self.config.k:
      return -generator.power[-1]
    return -sum(self.config.root_system.root_of(generator.element))

  def lowering_generators(self, max_size: int) -> list[LoopGenerator]:
    """Lowering generators of size ``<= max_size`` within the lateral bound, in PBW order."""
    cached = self._generators.get(max_size)
    if cached is not None:
      return cached
    data = self.config.root_system
    k = self.config.k
    if k == 0:
      gens = [
        LoopGenerator(x, ())
        for x in range(data.dim)
        if not data.is_cartan(x) and 0 < -sum(data.root_of(x)) <= max_size
      ]
    else:
      lateral = range(-self.box.lateral, self.box.lateral + 1)
      gens = [
        LoopGenerator(x, (*rest, -n))
        for x in range(data.dim)
        for rest in product(lateral, repeat=k - 1)
        for n in range(1, max_size + 1)
      ]
    gens.sort()
    self._generators[max_size] = gens
    return gens

  def _words(self, total: int) -> Iterator[Word]:
    """Ordered words of lowering generators whose sizes sum to ``total``."""
    gens = self.lowering_generators(total)
    sizes = [self.size(g) for g in gens]

    def extend(start: int, remaining: int, prefix: list[LoopGenerator]) -> Iterator[Word]:
      if remaining == 0:
        yield tuple(prefix)
        return
      for i in range(start, len(gens)):
        if sizes[i] <= remaining:
          prefix.append(gens[i])
          yield from extend(i, remaining - sizes[i], prefix)
          prefix.pop()

    yield from extend(0, total, [])

  # -- grading --------------------------------------------------------------------

  def word_weight(self, word: Word) -> Weight:
    data = self.config.root_system
    weight = [0] * data.rank
    for g in word:
      for i, w in enumerate(data.weight_of(g.element)):
        weight[i] += w
    return tuple(weight)

  def block_of(self, key: Key) -> BlockKey:
    word, base_key = cast(InducedKey, key)
    base_degrees, base_weight = self.base.block_of(base_key)
    k = self.config.k
    degrees = tuple(
      sum(g.power[i] for g in word) + (base_degrees[i] if i < k - 1 else 0) for i in range(k)
    )
    weight = tuple(a + b for a, b in zip(self.word_weight(word), base_weight, strict=True))
    return degrees, weight

  def depth(self, key: Key) -> int:
    word, _ = cast(InducedKey, key)
    return sum(self.size(g) for g in word)

  def base_depth(self, key: Key) -> int:
    _, base_key = cast(InducedKey, key)
    return self.base.depth(base_key)

  def _block_total(self, block: BlockKey) -> int | None:
    degrees, weight = block
    if self.config.k:
      return -degrees[-1]
    data = self.config.root_system
    base_weight = cast(HighestWeightLine, self.base).weight
    diff = [a - b for a, b in zip(base_weight, weight, strict=True)]
    coords = [
      sum((data.form_matrix[i][j] * diff[j] for j in range(data.rank)), Fraction(0))
      for i in range(data.rank)
    ]
    if any(c.denominator != 1 or c < 0 for c in coords):
      return None
    return int(sum(coords))

  def block_basis(self, block: BlockKey) -> tuple[Key, ...]:
    cached = self._blocks.get(block)
    if cached is not None:
      return cached
    degrees, weight = block
    k = self.config.k
    keys: list[InducedKey] = []
    total = self._block_total(block)
    if total is not None and total >= 0 and len(degrees) == k:
      for word in self._words(total):
        base_degrees = tuple(degrees[i] - sum(g.power[i] for g in word) for i in range(k - 1))
        # Base blocks below the base box stay out of the truncation.
        if base_degrees and -base_degrees[-1] > self.base.box.depth:
          continue
        word_weight = self.word_weight(word)
        rest = tuple(w - v for w, v in zip(weight, word_weight, strict=True))
        for base_key in self.base.block_basis((base_degrees, rest)):
          keys.append((word, base_key))
    result = tuple(keys)
    self._blocks[block] = result
    return result

  def keys_at_depth(self, depth: int) -> Iterator[InducedKey]:
    """Keys of a given depth over the in-box base vectors."""
    base_keys = list(self.base.in_box_keys())
    for word in self._words(depth):
      for base_key in base_keys:
        yield word, base_key

  def in_box_blocks(self) -> tuple[BlockKey, ...]:
    blocks: set[BlockKey] = set()
    base_keys = list(self.base.in_box_keys())
    for total in range(self.box.depth + 1):
      for word in self._words(total):
        for base_key in base_keys:
          blocks.add(self.block_of((word, base_key)))
    return tuple(sorted(blocks, key=lambda b: (self.block_depth(b), b)))

  # -- action ---------------------------------------------------------------------

  def _left_multiply(self, x: LoopGenerator, terms: Mapping[Key, Fraction]) -> Terms:
    out: Terms = {}
    for key, value in terms.items():
      word, base_key = cast(InducedKey, key)
      for new_word, c in self.lowering.left_multiply(x, word).items():
        add_into(out, (new_word, base_key), value * c)
    return out

  def _act_on_base(self, generator: LoopGenerator, base_key: Key, lifted: bool) -> Terms:
    if self.config.k:
      if generator.power[-1] > 0:
        return {}
      generator = LoopGenerator(generator.element, generator.power[:-1])
    base = self.base.unreduced() if lifted else self.base
    if lifted and isinstance(base, InducedModule):
      image: Mapping[Key, Fraction] = base._act(generator, cast(InducedKey, base_key), lifted)
    else:
      image = base.act_key(generator, base_key)
    return {((), b): v for b, v in image.items()}

  def _act(self, generator: LoopGenerator, key: InducedKey, lifted: bool) -> Terms:
    """Action on a key; with ``lifted`` the base acts through its unreduced module."""
    memo = self._lifted_actions if lifted else self._actions
    cached = memo.get((generator, key))
    if cached is not None:
      return cached
    word, base_key = key
    out: Terms
    if self.is_lowering(generator):
      out = self._left_multiply(generator, {key: Fraction(1)})
    elif not word:
      out = self._act_on_base(generator, base_key, lifted)
    else:
      x, rest = word[0], (word[1:], base_key)
      out = self._left_multiply(x, self._act(generator, rest, lifted))
      for h, c in self.config.bracket_generators(generator, x).items():
        image = (
          self._act(h, rest, lifted) if isinstance(h, LoopGenerator) else self.act_key(h, rest)
        )
        for target, v in image.items():
          add_into(out, target, c * v)
    memo[(generator, key)] = out
    return out

  def act_loop(self, generator: LoopGenerator, key: Key) -> Mapping[Key, Fraction]:
    return self._act(generator, cast(InducedKey, key), lifted=False)

  # -- contravariant form ------------------------------------------------------------

  def pair_keys(self, left: Key, right: Key) -> Fraction:
    """``⟨m ⊗ b, m' ⊗ b'⟩ = ⟨b, (σ(m) m' ⊗ b')_0⟩``.

    ``σ(x_1 ⋯ x_n) = σ(x_n) ⋯ σ(x_1)`` is the anti-involution extended to words. The
    base acts through its unreduced module; its radical pairs to zero with every vector.
    """
    cache_key = (cast(InducedKey, left), cast(InducedKey, right))
    cached = self._pairs.get(cache_key)
    if cached is not None:
      return cached
    word, base_key = cast(InducedKey, left)
    terms: dict[InducedKey, Fraction] = {cast(InducedKey, right): Fraction(1)}
    for x in word:
      sigma = cast(LoopGenerator, anti_involution_generator(self.config, x))
      moved: Terms = {}
      for key, value in terms.items():
        for image, c in self._act(sigma, key, lifted=True).items():
          add_into(moved, image, value * c)
      terms = cast(dict[InducedKey, Fraction], moved)
    lifted_base = self.base.unreduced()
    value = Fraction(0)
    for (image_word, image_base), c in terms.items():
      if not image_word:
        value += c * lifted_base.pair_keys(base_key, image_base)
    self._pairs[cache_key] = value
    return value

  def gram(self, block: BlockKey) -> list[dict[int, Fraction]]:
    """Gram matrix of the contravariant form on a block, as sparse rows."""
    basis = self.block_basis(block)
    rows: list[dict[int, Fraction]] = [{} for _ in basis]
    for i, left in enumerate(basis):
      for j in range(i, len(basis)):
        value = self.pair_keys(left, basis[j])
        if value:
          rows[i][j] = value
          rows[j][i] = value
    return rows

  def decompose(self, terms: Mapping[Key, Fraction]) -> dict[Key, PBWElement]:
    """Write a vector as ``Σ z_i ⊗ ω_i`` with distinct base keys ``ω_i``."""
    parts: dict[Key, dict[Word, Fraction]] = {}
    for key, value in terms.items():
      word, base_key = cast(InducedKey, key)
      parts.setdefault(base_key, {})[word] = value
    return {b: PBWElement(self.lowering, words) for b, words in parts.items()}


def verma_module(config: AlgebraConfig, weight: Sequence[int], depth: int) -> InducedModule:
  """``U(n⁻) ⊗ C_λ`` truncated at height ``depth``."""
  if config.k != 0:
    config = AlgebraConfig(config.root_system, 0, config.p)
  line = HighestWeightLine(config, weight)
  return InducedModule(line, config, TruncationBox(depth=depth))

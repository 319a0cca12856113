"""Finite-dimensional irreducible modules ``V(λ)`` of ``g``."""

from collections.abc import Sequence
from fractions import Fraction

from multiloop.algebra.loop_algebra import AlgebraConfig, LoopGenerator
from multiloop.algebra.root_system import RootSystemData, Weight, weyl_dimension, weyl_group
from multiloop.errors import VerificationError
from multiloop.linalg import SparseRow
from multiloop.modules.base import Key, ModuleError
from multiloop.modules.induced import verma_module
from multiloop.modules.quotient import QuotientModule


def lowest_weight(data: RootSystemData, weight: Sequence[int]) -> Weight:
  """``w₀λ`` for the longest Weyl group element ``w₀``."""
  longest = max(weyl_group(data), key=lambda w: len(w.word))
  return longest.apply(weight)


def weight_height(data: RootSystemData, difference: Sequence[int]) -> int:
  """Height of a weight difference that lies in the root lattice."""
  total = sum(
    (data.form_matrix[i][j] * difference[j] for i in range(data.rank) for j in range(data.rank)),
    Fraction(0),
  )
  if total.denominator != 1:
    raise ModuleError(f"{tuple(difference)} is not in the root lattice")
  return int(total)


class WeylModule(QuotientModule):
  """``V(λ)`` as the Gram quotient of a Verma module truncated at ``height(λ - w₀λ)``."""

  def __init__(self, config: AlgebraConfig, weight: Sequence[int]):
    data = config.root_system
    self.weight: Weight = tuple(weight)
    lowest = lowest_weight(data, self.weight)
    depth = weight_height(data, [a - b for a, b in zip(self.weight, lowest, strict=True)])
    super().__init__(verma_module(config, self.weight, depth), name=f"V{self.weight}")

  @property
  def highest_key(self) -> Key:
    return self.induced.block_basis(((), self.weight))[0]

  def weights(self) -> list[tuple[Weight, int]]:
    """Weights with multiplicities, highest first."""
    return [(block[1], len(self.block_basis(block))) for block in self.in_box_blocks()]

  def basis(self) -> list[Key]:
    return list(self.in_box_keys())

  def action_matrix(self, element: int) -> list[SparseRow]:
    """Columns of a Chevalley generator in the ordered basis of :meth:`basis`."""
    keys = self.basis()
    index = {key: i for i, key in enumerate(keys)}
    generator = LoopGenerator(element, ())
    return [
      {index[image]: value for image, value in self.act_loop(generator, key).items()}
      for key in keys
    ]


def weyl_module(config: AlgebraConfig, weight: Sequence[int]) -> WeylModule:
  """Build ``V(λ)`` for dominant ``λ`` and check its dimension."""
  data = config.root_system
  if len(weight) != data.rank:
    raise ModuleError(f"Weight {tuple(weight)} has length {len(weight)}, expected {data.rank}")
  if any(w < 0 for w in weight):
    raise ModuleError(f"Weight {tuple(weight)} is not dominant")
  if config.k != 0:
    config = AlgebraConfig(data, 0, config.p)
  module = WeylModule(config, weight)
  expected = weyl_dimension(data, weight)
  if module.dimension() != expected:
    raise VerificationError(
      f"{module.name} has {module.dimension()} basis vectors, Weyl formula gives {expected}"
    )
  return module

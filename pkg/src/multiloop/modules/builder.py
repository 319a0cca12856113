"""Build the tower ``V(λ) → Ê¹ → … → Ê^k`` and describe it as JSON."""

from dataclasses import dataclass
from typing import Any

from multiloop.algebra.codec import format_fraction
from multiloop.algebra.loop_algebra import AlgebraConfig
from multiloop.algebra.root_system import build_root_system, parse_algebra
from multiloop.modules.base import (
  BlockKey,
  BoxOverflowError,
  GradedModule,
  ModuleError,
  TruncationBox,
)
from multiloop.modules.derived import ShiftedModule
from multiloop.modules.induced import InducedModule
from multiloop.modules.quotient import QuotientModule
from multiloop.modules.weyl import weyl_module


def induce(
  base: GradedModule,
  config: AlgebraConfig,
  box: TruncationBox,
  shift: tuple[int, ...] | None = None,
) -> GradedModule:
  """``Ind^k_{k-1}(base)`` inside ``box``, with ``d``-eigenvalues moved by ``shift``."""
  induced = InducedModule(base, config, box)
  if shift is None or not any(shift):
    return induced
  return ShiftedModule(induced, shift)


def irreducible_quotient(induced: InducedModule) -> QuotientModule:
  """Quotient by the radical of the contravariant form.

  The degree-0 block must pair non-degenerately, otherwise the radical would meet the
  generating subspace and the quotient would not be the irreducible one.
  """
  quotient = QuotientModule(induced, name=f"E^{induced.config.k}({induced.base.name})")
  for block in induced.in_box_blocks():
    if induced.block_depth(block) != 0:
      continue
    data = quotient.quotient_block(block)
    if data.radical_dimension:
      raise ModuleError(
        f"Degree-0 block {block} of {induced.name} is degenerate "
        f"(radical dimension {data.radical_dimension})"
      )
  return quotient


def level_box(box: TruncationBox, level: int, k: int) -> TruncationBox:
  """Box used at an intermediate level of the tower: depth and lateral bound ``B``."""
  if level == k:
    return box
  return TruncationBox(depth=box.lateral, lateral=box.lateral)


def induced_loop_module(
  config: AlgebraConfig, weight: tuple[int, ...], box: TruncationBox
) -> InducedModule:
  """``Ind^k_{k-1}(Ê^{k-1}_λ)`` for ``k >= 1``."""
  if config.k < 1:
    raise ModuleError("Induced loop modules need k >= 1")
  data = config.root_system
  module: GradedModule = weyl_module(AlgebraConfig(data, 0, config.p), weight)
  for level in range(1, config.k):
    induced = InducedModule(
      module, AlgebraConfig(data, level, config.p), level_box(box, level, config.k)
    )
    module = irreducible_quotient(induced)
  return InducedModule(module, config, box)


def loop_module(
  config: AlgebraConfig, weight: tuple[int, ...], box: TruncationBox
) -> QuotientModule:
  """``Ê^k_λ`` truncated to ``box``; ``V(λ)`` when ``k = 0``."""
  if config.k == 0:
    return weyl_module(config, weight)
  return irreducible_quotient(induced_loop_module(config, weight, box))


@dataclass(frozen=True)
class ModuleDescription:
  """Parameters that determine a truncated module."""

  alg: str
  k: int
  weight: tuple[int, ...]
  p: int = 2
  depth: int = 3
  lateral: int = 3

  @property
  def box(self) -> TruncationBox:
    return TruncationBox(depth=self.depth, lateral=self.lateral)

  def config(self) -> AlgebraConfig:
    series, rank = parse_algebra(self.alg)
    return AlgebraConfig(build_root_system(series, rank), self.k, self.p)

  def build(self) -> QuotientModule:
    return loop_module(self.config(), self.weight, self.box)

  def to_json(self) -> dict[str, Any]:
    return {
      "alg": self.alg,
      "k": self.k,
      "lambda": list(self.weight),
      "p": self.p,
      "depth": self.depth,
      "lateral": self.lateral,
    }

  @classmethod
  def from_json(cls, value: Any) -> "ModuleDescription":
    if not isinstance(value, dict):
      raise ModuleError("Module description must be a JSON object")
    try:
      weight = value["lambda"]
      if isinstance(weight, int):
        weight = [weight]
      return cls(
        alg=str(value["alg"]),
        k=int(value["k"]),
        weight=tuple(int(w) for w in weight),
        p=int(value.get("p", 2)),
        depth=int(value.get("depth", 3)),
        lateral=int(value.get("lateral", 3)),
      )
    except KeyError as e:
      raise ModuleError(f"Module description is missing key {e}") from None
    except (TypeError, ValueError) as e:
      raise ModuleError(f"Invalid module description: {e}") from None


def _block_json(block: BlockKey) -> dict[str, Any]:
  degrees, weight = block
  return {"degrees": list(degrees), "weight": list(weight)}


def module_to_json(module: QuotientModule, description: ModuleDescription) -> dict[str, Any]:
  """Per-block dimensions of the induced module, its radical and the quotient."""
  blocks = []
  for data in module.block_table():
    entry = _block_json(data.block)
    entry.update(
      depth=module.induced.block_depth(data.block),
      dimension=len(data.keys),
      radical_dimension=data.radical_dimension,
      quotient_dimension=data.rank,
    )
    blocks.append(entry)
  config = module.config
  return {
    "module": module.name,
    "description": description.to_json(),
    "level_scalars": [format_fraction(c) for c in config.level_scalars],
    "dimension": sum(b["quotient_dimension"] for b in blocks),
    "blocks": blocks,
  }


def check_in_box(module: GradedModule, block: BlockKey) -> None:
  if block not in module.in_box_blocks():
    raise BoxOverflowError(f"Block {block} is outside the truncation box of {module.name}")

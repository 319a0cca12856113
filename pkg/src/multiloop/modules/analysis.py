"""Checks on truncated modules: norms, commutants, cogeneration, radicals, distinguishability."""

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from rich.console import Console

from multiloop.algebra.loop_algebra import (
  LoopElement,
  LoopGenerator,
  anti_involution_generator,
)
from multiloop.commutator import CorollaryReport, corollary_check
from multiloop.linalg import SparseRow, nullspace, rank
from multiloop.modules.base import (
  BlockKey,
  BoxOverflowError,
  GradedModule,
  Key,
  ModuleError,
  ModuleVector,
  Terms,
)
from multiloop.modules.builder import check_in_box
from multiloop.modules.derived import ShiftedModule
from multiloop.modules.induced import InducedModule
from multiloop.modules.quotient import QuotientModule

_console = Console(stderr=True)


def v_norm_k(v: ModuleVector) -> int:
  """``|v|_k``: the sum of the depths ``i`` of the non-zero ``d_k``-eigencomponents."""
  if v.is_zero:
    raise ModuleError("|v|_k is undefined for the zero vector")
  return sum(v.depth_components())


def top_degree_part(v: ModuleVector) -> ModuleVector:
  """The ``d_k``-eigencomponent of smallest depth."""
  if v.is_zero:
    raise ModuleError("The zero vector has no top component")
  components = v.depth_components()
  return components[min(components)]


def contravariant_gram(module: InducedModule, block: BlockKey) -> list[SparseRow]:
  check_in_box(module, block)
  return module.gram(block)


def _block_matrices(
  module: GradedModule, generator: LoopGenerator, block: BlockKey, allowed: set[BlockKey]
) -> tuple[BlockKey, list[SparseRow]] | None:
  if module.shift_block(block, generator) not in allowed:
    return None
  return module.matrix(generator, block)


def commutant_dimension(module: GradedModule) -> int:
  """Dimension of the grading-preserving maps commuting with every in-box generator.

  Unknowns are one square matrix ``X_b`` per in-box block; each generator ``g`` mapping
  block ``b`` into block ``b'`` contributes ``G X_b = X_{b'} G``. Generators whose images
  leave the box are skipped.
  """
  blocks = [b for b in module.in_box_blocks() if module.block_basis(b)]
  allowed = set(blocks)
  sizes = {b: len(module.block_basis(b)) for b in blocks}
  offsets: dict[BlockKey, int] = {}
  total = 0
  for b in blocks:
    offsets[b] = total
    total += sizes[b] ** 2
  rows: list[SparseRow] = []
  for generator in module.in_box_generators():
    for b in blocks:
      result = _block_matrices(module, generator, b, allowed)
      if result is None:
        continue
      target, columns = result
      n, m = sizes[b], sizes[target]
      by_row: dict[int, SparseRow] = {}
      for col, column in enumerate(columns):
        for i, value in column.items():
          by_row.setdefault(i, {})[col] = value
      for i in range(m):
        for j in range(n):
          row: SparseRow = {}
          for col, value in by_row.get(i, {}).items():
            index = offsets[b] + col * n + j
            row[index] = row.get(index, Fraction(0)) + value
          for col, value in columns[j].items():
            index = offsets[target] + i * m + col
            row[index] = row.get(index, Fraction(0)) - value
          row = {key: value for key, value in row.items() if value}
          if row:
            rows.append(row)
  return total - rank(rows, total)


@dataclass(frozen=True)
class BlockRank:
  """Rank of the stacked raising maps on one block."""

  block: BlockKey
  dimension: int
  rank: int

  @property
  def passed(self) -> bool:
    return self.rank == self.dimension


def _raising_rows(
  module: GradedModule, block: BlockKey, allowed: set[BlockKey]
) -> list[SparseRow]:
  rows: list[SparseRow] = []
  for generator in module.in_box_generators():
    if not module.is_raising(generator):
      continue
    result = _block_matrices(module, generator, block, allowed)
    if result is None:
      continue
    _, columns = result
    by_row: dict[int, SparseRow] = {}
    for col, column in enumerate(columns):
      for i, value in column.items():
        by_row.setdefault(i, {})[col] = value
    rows.extend(by_row[i] for i in sorted(by_row))
  return rows


def cogeneration_check(module: GradedModule) -> list[BlockRank]:
  """Every non-zero vector below the top must reach a shallower block under ``ĝ_k⁺``."""
  blocks = module.in_box_blocks()
  allowed = set(blocks)
  report = []
  for block in blocks:
    if module.block_depth(block) == 0:
      continue
    size = len(module.block_basis(block))
    report.append(BlockRank(block, size, rank(_raising_rows(module, block, allowed), size)))
  return report


def top_annihilator(module: GradedModule, block: BlockKey) -> list[Terms]:
  """Vectors of a block killed by every in-box raising generator."""
  keys = module.block_basis(block)
  kernel = nullspace(_raising_rows(module, block, set(module.in_box_blocks())), len(keys))
  return [{keys[j]: v for j, v in vector.items()} for vector in kernel]


@dataclass
class ClosureReport:
  """Counts for an identity checked over many in-box cases."""

  checked: int = 0
  skipped: int = 0
  failures: list[str] = field(default_factory=list)

  @property
  def passed(self) -> bool:
    return not self.failures


def radical_closure_check(module: QuotientModule) -> ClosureReport:
  """In-box generators map radical vectors into the radical."""
  induced = module.induced
  allowed = set(induced.in_box_blocks())
  report = ClosureReport()
  for block in induced.in_box_blocks():
    radical = module.quotient_block(block).radical()
    if not radical:
      continue
    for generator in induced.in_box_generators():
      target = induced.shift_block(block, generator)
      if target not in allowed:
        report.skipped += len(radical)
        continue
      for vector in radical:
        try:
          image = module.quotient_block(target).project(induced.act_terms(generator, vector))
        except BoxOverflowError:
          report.skipped += 1
          continue
        report.checked += 1
        if image:
          report.failures.append(f"{induced.config.label(generator)} on radical of {block}")
  return report


def contravariance_check(module: GradedModule, max_depth: int | None = None) -> ClosureReport:
  """``⟨a·u, w⟩ = ⟨u, σ(a)·w⟩`` for in-box basis vectors and generators."""
  allowed = set(module.in_box_blocks())
  report = ClosureReport()
  generators = module.in_box_generators()
  for block in module.in_box_blocks():
    if max_depth is not None and module.block_depth(block) > max_depth:
      continue
    for key in module.block_basis(block):
      u = module.basis_vector(key)
      for a in generators:
        target = module.shift_block(block, a)
        if target not in allowed:
          continue
        sigma = anti_involution_generator(module.config, a)
        for other in module.block_basis(target):
          w = module.basis_vector(other)
          try:
            left = module.pair(module.act(a, u), w)
            right = module.pair(u, module.act(sigma, w))
          except BoxOverflowError:
            report.skipped += 1
            continue
          report.checked += 1
          if left != right:
            report.failures.append(f"<{module.config.label(a)}·{key!r}, {other!r}>")
  return report


def action_relation_check(module: GradedModule, seed: int, samples: int = 20) -> ClosureReport:
  """``a·(b·v) - b·(a·v) = [a, b]·v`` on seeded in-box samples."""
  rng = random.Random(seed)
  generators = module.in_box_generators()
  keys = list(module.in_box_keys())
  report = ClosureReport()
  config = module.config
  for _ in range(samples):
    a, b = rng.choice(generators), rng.choice(generators)
    v = module.basis_vector(rng.choice(keys))
    try:
      left = module.act(a, module.act(b, v)) - module.act(b, module.act(a, v))
      right = module.act(LoopElement(config, dict(config.bracket_generators(a, b))), v)
    except BoxOverflowError:
      report.skipped += 1
      continue
    report.checked += 1
    if left != right:
      key = next(iter(v.terms))
      report.failures.append(f"[{config.label(a)}, {config.label(b)}] on {key!r}")
  return report


def proper_submodule_vectors(
  module: InducedModule, quotient: QuotientModule | None = None
) -> list[ModuleVector]:
  """Radical vectors of the shallowest in-box blocks below the top that have any."""
  quotient = quotient or QuotientModule(module)
  found: list[ModuleVector] = []
  found_depth: int | None = None
  for block in module.in_box_blocks():
    depth = module.block_depth(block)
    if depth == 0:
      continue
    if found_depth is not None and depth > found_depth:
      break
    for vector in quotient.quotient_block(block).radical():
      found.append(ModuleVector(module, vector))
      found_depth = depth
  return found


def in_radical(quotient: QuotientModule, v: ModuleVector) -> bool:
  """True when ``v`` is non-zero and projects to zero in every in-box block."""
  if v.is_zero:
    return False
  try:
    return not quotient.project(v.terms)
  except BoxOverflowError:
    return False


def default_candidate(module: InducedModule) -> ModuleVector:
  """``(f ⊗ t_k^{-1}) ⊗ ω`` with ``f = e_{-α_1}`` and ``ω`` a degree-0 base vector."""
  data = module.config.root_system
  f = data.root_index(tuple(-1 if i == 0 else 0 for i in range(data.rank)))
  power = tuple(-1 if i == module.config.k - 1 else 0 for i in range(module.config.k))
  top = module.base.block_basis(module.base.top_blocks()[0])[0]
  return module.vector({((LoopGenerator(f, power),), top): 1})


class CandidateSource(Enum):
  """Where a distinguishability candidate came from."""

  RADICAL = "radical"
  GIVEN = "given"
  DEFAULT = "default"


@dataclass(frozen=True)
class CandidateResult:
  """Certificate and radical membership of one candidate vector."""

  source: CandidateSource
  depth: int
  norm: int
  in_radical: bool
  corollary: CorollaryReport

  @property
  def passed(self) -> bool:
    return self.in_radical and self.corollary.passed


@dataclass(frozen=True)
class TargetResult:
  name: str
  shift: tuple[int, ...]
  vectors: int
  r_values: tuple[int, ...]
  survivors: int

  @property
  def passed(self) -> bool:
    return self.survivors == 0


@dataclass(frozen=True)
class DistinguishReport:
  candidates: list[CandidateResult]
  targets: list[TargetResult]

  @property
  def passed(self) -> bool:
    return all(c.passed for c in self.candidates) and all(t.passed for t in self.targets)

  @property
  def verdict(self) -> str:
    """Not isomorphic only when every candidate is certified and lies in the radical."""
    return "not isomorphic" if self.passed and self.candidates else "inconclusive"


def annihilation_check(target: GradedModule, r_values: Sequence[int]) -> int:
  """Count degree-0 vectors of ``target`` not killed by some ``x ⊗ t_{k-1}^r``."""
  config = target.config
  k = config.k
  survivors = 0
  for block in target.top_blocks():
    for key in target.block_basis(block):
      for r in r_values:
        power = tuple(r if i == k - 2 else 0 for i in range(k))
        if any(
          target.act_key(LoopGenerator(x, power), key) for x in range(config.root_system.dim)
        ):
          survivors += 1
          break
  return survivors


def _support(target: GradedModule) -> int:
  depths = [
    target.base_depth(key) for block in target.top_blocks() for key in target.block_basis(block)
  ]
  return max(depths, default=0)


def distinguishability_check(
  module: InducedModule,
  targets: Sequence[GradedModule],
  window: int = 5,
  candidates: Sequence[ModuleVector] | None = None,
) -> DistinguishReport:
  """Separate a proper-submodule vector of ``Ind^k(Ê^{k-1})`` from the tops of ``targets``.

  A candidate ``v`` keeps ``(x ⊗ t_{k-1}^r)·v ≠ 0`` for every ``r`` in the window, while
  every degree-0 vector of a target is killed by all ``g ⊗ t_{k-1}^r`` once ``r`` passes
  the target's support. Candidates outside the computed radical, including the fallback
  used when the radical is empty, fail and leave the verdict inconclusive.
  """
  if module.config.k < 2:
    raise ModuleError("Distinguishability needs k >= 2")
  quotient = QuotientModule(module)
  source = CandidateSource.GIVEN
  if candidates is None:
    candidates = proper_submodule_vectors(module, quotient)
    source = CandidateSource.RADICAL
    if not candidates:
      _console.print(
        "[yellow]Warning:[/yellow] no in-box radical vector found; "
        "(f⊗t_k^-1)⊗ω is reported but proves nothing"
      )
      candidates = [default_candidate(module)]
      source = CandidateSource.DEFAULT
  results = []
  r_min = 1
  for v in candidates:
    if v.module is not module:
      raise ModuleError(f"Candidate vector belongs to {v.module.name}, not {module.name}")
    top = top_degree_part(v)
    report = corollary_check(module, top, window=window)
    r_min = max(r_min, report.r_min)
    results.append(
      CandidateResult(source, top.depth, v_norm_k(top), in_radical(quotient, v), report)
    )
  target_results = []
  for target in targets:
    start = max(r_min, _support(target) + 1)
    r_values = tuple(range(start, start + window + 1))
    shift = target.shift if isinstance(target, ShiftedModule) else (0,) * target.config.k
    vectors = sum(len(target.block_basis(b)) for b in target.top_blocks())
    target_results.append(
      TargetResult(target.name, shift, vectors, r_values, annihilation_check(target, r_values))
    )
  return DistinguishReport(results, target_results)


def level_check(module: GradedModule) -> ClosureReport:
  """``[e_{α_1}(ε_i), e_{-α_1}(-ε_i)] = α_1∨ + c_i`` on the degree-0 vectors.

  Along ``t_k`` the raising factor kills a top vector, so the commutator must also equal
  ``(λ_1 - p^k - h∨) v`` for ``v`` of weight ``λ``.
  """
  config = module.config
  data = config.root_system
  k = config.k
  report = ClosureReport()
  simple = tuple(1 if i == 0 else 0 for i in range(data.rank))
  e = data.root_index(simple)
  f = data.root_index(tuple(-c for c in simple))
  for block in module.top_blocks():
    for key in module.block_basis(block):
      v = module.basis_vector(key)
      for i in range(1, k + 1):
        unit = tuple(1 if j == i - 1 else 0 for j in range(k))
        a = LoopGenerator(e, unit)
        b = LoopGenerator(f, tuple(-u for u in unit))
        try:
          left = module.act(a, module.act(b, v)) - module.act(b, module.act(a, v))
          right = module.act(LoopElement(config, dict(config.bracket_generators(a, b))), v)
        except BoxOverflowError:
          report.skipped += 1
          continue
        report.checked += 1
        if left != right:
          report.failures.append(f"[e(ε_{i}), f(-ε_{i})] on {key!r}")
        elif i == k and left != (block[1][0] + config.level(k)) * v:
          report.failures.append(f"c_{k} scalar on {key!r}")
  return report

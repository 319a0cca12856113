"""The Sugawara operator ``L₀`` along ``t_k`` and its commutators with loop generators.

On a module whose ``d_k``-eigenvalues are bounded above,

  ``L₀ = ½ Σ_j e_j(0) e^j(0) + Σ_{d>0} Σ_j e_j(-d) e^j(d)``

where ``e_j(d) = e_j ⊗ t_k^d``. Applied to ``v`` only ``d <= depth(v)`` contribute.
The derivation of the ``n' = 0`` branch is recorded in ``docs/sugawara.md``.
"""

import hashlib
import json
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from multiloop.algebra.codec import chevalley_from_json, format_fraction
from multiloop.algebra.loop_algebra import AlgebraConfig, LoopElement, LoopGenerator, MultiIndex
from multiloop.algebra.root_system import GVector, RootSystemData, bracket_vectors
from multiloop.errors import DataError
from multiloop.modules.base import BoxOverflowError, GradedModule, Key, ModuleVector
from multiloop.modules.induced import InducedModule


class SugawaraError(DataError):
  """Sugawara operation called outside its preconditions."""


@dataclass(frozen=True)
class SugawaraContext:
  """A module at level ``k >= 1`` together with the dual basis of ``g``."""

  module: GradedModule

  def __post_init__(self) -> None:
    if self.module.config.k < 1:
      raise SugawaraError("The Sugawara operator needs k >= 1")

  @property
  def config(self) -> AlgebraConfig:
    return self.module.config

  @property
  def data(self) -> RootSystemData:
    return self.module.config.root_system

  def along_k(self, d: int) -> MultiIndex:
    return (0,) * (self.config.k - 1) + (d,)

  def current(self, x: Mapping[int, Fraction] | int, power: Sequence[int]) -> LoopElement:
    """``x ⊗ t^power`` for a basis index or a combination of basis indices."""
    terms = {x: Fraction(1)} if isinstance(x, int) else x
    power = tuple(power)
    return LoopElement(self.config, {LoopGenerator(i, power): v for i, v in terms.items()})

  def zero(self) -> ModuleVector:
    return ModuleVector(self.module, {})

  def product(
    self,
    left: tuple[Mapping[int, Fraction] | int, Sequence[int]],
    right: tuple[Mapping[int, Fraction] | int, Sequence[int]],
    v: ModuleVector,
  ) -> ModuleVector:
    """``left · right · v``: the right factor acts first."""
    image = self.module.act(self.current(*right), v)
    if image.is_zero:
      return image
    return self.module.act(self.current(*left), image)


def _dual_pairs(ctx: SugawaraContext) -> Iterator[tuple[int, GVector]]:
  for j in range(ctx.data.dim):
    yield j, ctx.data.dual(j)


def apply_L0(ctx: SugawaraContext, v: ModuleVector) -> ModuleVector:
  """Normal-ordered ``L₀ v``, summing only the modes that act on ``v``."""
  return apply_L0_regularized(ctx, v, max(v.depth, 0), ordered=True)


def apply_L0_regularized(
  ctx: SugawaraContext, v: ModuleVector, m: int, ordered: bool = True
) -> ModuleVector:
  """``½ Σ_j Σ_{|d| <= m} e_j(-d) e^j(d) v``: the cut-off ``ψ(d/m)`` at ``ε = 1/m``.

  With ``ordered`` the products are normal ordered and the result equals ``L₀ v`` once
  ``m >= depth(v)``. Without it the literal products are used and the result differs
  from ``L₀ v`` by :func:`regularization_offset` times ``v``.
  """
  if m < 0:
    raise SugawaraError(f"Cut-off must be non-negative, got {m}")
  out = ctx.zero()
  half = Fraction(1, 2)
  for j, dual in _dual_pairs(ctx):
    out = out + half * ctx.product((j, ctx.along_k(0)), (dual, ctx.along_k(0)), v)
    for d in range(1, m + 1):
      raised = ctx.product((j, ctx.along_k(-d)), (dual, ctx.along_k(d)), v)
      if ordered:
        out = out + raised
        continue
      lowered = ctx.product((j, ctx.along_k(d)), (dual, ctx.along_k(-d)), v)
      out = out + half * raised + half * lowered
  return out


def regularization_offset(ctx: SugawaraContext, m: int) -> Fraction:
  """``½ · dim g · c_k · m(m+1)/2``: unordered minus ordered cut-off sum."""
  level = ctx.config.level(ctx.config.k)
  return Fraction(ctx.data.dim) * level * m * (m + 1) / 4


def casimir_eigenvalue(data: RootSystemData, weight: Sequence[int]) -> Fraction:
  """``½⟨λ, λ + 2ρ⟩``, the eigenvalue of ``L₀`` on a top vector of weight ``λ``."""
  shifted = [w + 2 * r for w, r in zip(weight, data.rho, strict=True)]
  return data.pair(weight, shifted) / 2


def highest_vector(module: InducedModule, weight: Sequence[int]) -> ModuleVector:
  """The degree-0 vector of weight ``λ`` with every ``d_i``-eigenvalue zero."""
  target = ((0,) * module.config.k, tuple(weight))
  for key in module.keys_at_depth(0):
    if module.block_of(key) == target:
      return module.basis_vector(key)
  raise SugawaraError(f"{module.name} has no top vector of weight {tuple(weight)}")


def _check_power(ctx: SugawaraContext, x: int, n: Sequence[int]) -> None:
  if len(n) != ctx.config.k:
    raise SugawaraError(f"Exponent {tuple(n)} has length {len(n)}, expected {ctx.config.k}")
  if not 0 <= x < ctx.data.dim:
    raise SugawaraError(f"Basis index {x} out of range for {ctx.data.name}")


def commutator_lhs(
  ctx: SugawaraContext, x: int, n: Sequence[int], v: ModuleVector
) -> ModuleVector:
  """``x(n)·L₀v - L₀(x(n)·v)``."""
  _check_power(ctx, x, n)
  a = ctx.current(x, n)
  return ctx.module.act(a, apply_L0(ctx, v)) - apply_L0(ctx, ctx.module.act(a, v))


def commutator_rhs(
  ctx: SugawaraContext, x: int, n: Sequence[int], v: ModuleVector
) -> ModuleVector:
  """Closed form of ``[x(n), L₀]`` for ``n' = (n_1..n_{k-1}) ≠ 0``.

  ``Σ_j Σ_{d<n_k/2} (-e_j(n'+d)·[x,e^j](n_k-d) + e_j(d)·[x,e^j](n-d))``, the boundary
  terms ``-½ e_j(n'+n_k/2)·[x,e^j](n_k/2) + ½ e_j(n_k/2)·[x,e^j](n-n_k/2)`` when ``n_k``
  is even, and ``h∨ n_k x(n)``. Terms with ``n_k - d > depth(v)`` vanish on ``v``.
  """
  _check_power(ctx, x, n)
  prime, m = tuple(n[:-1]), n[-1]
  if not any(prime):
    raise SugawaraError("n' = 0: use classical_rhs")
  data = ctx.data
  zeros = (0,) * len(prime)
  out = ctx.zero()
  ceiling = -((-m) // 2)
  for j, dual in _dual_pairs(ctx):
    inner = bracket_vectors(data, {x: Fraction(1)}, dual)
    if not inner:
      continue
    for d in range(m - v.depth, ceiling):
      out = out - ctx.product((j, (*prime, d)), (inner, (*zeros, m - d)), v)
      out = out + ctx.product((j, (*zeros, d)), (inner, (*prime, m - d)), v)
    if m % 2 == 0:
      h = m // 2
      half = Fraction(1, 2)
      out = out - half * ctx.product((j, (*prime, h)), (inner, (*zeros, h)), v)
      out = out + half * ctx.product((j, (*zeros, h)), (inner, (*prime, m - h)), v)
  out = out + (ctx.config.dual_coxeter * m) * ctx.module.act(ctx.current(x, n), v)
  return out


def classical_rhs(
  ctx: SugawaraContext, x: int, n: Sequence[int], v: ModuleVector
) -> ModuleVector:
  """``[x(n), L₀] = n_k (c_k + h∨) x(n)`` when only ``t_k`` occurs in ``n``."""
  _check_power(ctx, x, n)
  if any(n[:-1]):
    raise SugawaraError("n' ≠ 0: use commutator_rhs")
  k = ctx.config.k
  scalar = n[-1] * (ctx.config.level(k) + ctx.config.dual_coxeter)
  return scalar * ctx.module.act(ctx.current(x, n), v)


def vector_digest(v: ModuleVector) -> str:
  """Stable sha256 of a vector's exact coefficients."""
  items = sorted((repr(key), format_fraction(value)) for key, value in v.terms.items())
  return hashlib.sha256(json.dumps(items).encode()).hexdigest()


@dataclass(frozen=True)
class SugawaraGrid:
  """Generators ``x``, exponents ``n`` and the depths of the test vectors."""

  elements: tuple[int, ...]
  exponents: tuple[MultiIndex, ...]
  max_depth: int = 1
  max_vectors: int = 3
  cutoffs: tuple[int, ...] = (0, 1, 2, 3)

  @classmethod
  def default(cls, config: AlgebraConfig) -> "SugawaraGrid":
    k = config.k
    along = [(1,), (-1,), (2,), (0,)]
    lateral = [(1, -1), (-1, 1), (2, 0), (1, 0), (-1, -1)] if k >= 2 else []
    exponents = [(0,) * (k - 1) + e for e in along]
    exponents += [(0,) * (k - 2) + e for e in lateral]
    return cls(elements=tuple(range(config.root_system.dim)), exponents=tuple(exponents))

  @classmethod
  def from_json(cls, config: AlgebraConfig, value: Any) -> "SugawaraGrid":
    if not isinstance(value, dict):
      raise SugawaraError("Grid must be a JSON object")
    default = cls.default(config)
    elements = value.get("x")
    exponents = value.get("n")
    try:
      parsed_elements = (
        tuple(chevalley_from_json(config, item, f"x[{i}]") for i, item in enumerate(elements))
        if elements is not None
        else default.elements
      )
      parsed_exponents = (
        tuple(tuple(int(c) for c in e) for e in exponents)
        if exponents is not None
        else default.exponents
      )
      grid = cls(
        elements=parsed_elements,
        exponents=parsed_exponents,
        max_depth=int(value.get("max_depth", default.max_depth)),
        max_vectors=int(value.get("max_vectors", default.max_vectors)),
        cutoffs=tuple(int(m) for m in value.get("cutoffs", default.cutoffs)),
      )
    except (TypeError, ValueError) as e:
      raise SugawaraError(f"Invalid grid: {e}") from None
    for e in grid.exponents:
      if len(e) != config.k:
        raise SugawaraError(f"Grid exponent {e} has length {len(e)}, expected {config.k}")
    return grid

  def vectors(self, module: InducedModule) -> list[ModuleVector]:
    """The first ``max_vectors`` basis vectors at each depth ``0..max_depth``."""
    out = []
    for depth in range(self.max_depth + 1):
      for i, key in enumerate(module.keys_at_depth(depth)):
        if i >= self.max_vectors:
          break
        out.append(module.basis_vector(key))
    return out


@dataclass(frozen=True)
class CommutatorCase:
  """``lhs = rhs`` for one ``(x, n, v)``."""

  x: str
  n: MultiIndex
  vector: Key
  branch: str
  lhs: ModuleVector
  rhs: ModuleVector
  central_cancellation: bool | None = None

  @property
  def passed(self) -> bool:
    return self.lhs == self.rhs and self.central_cancellation is not False


@dataclass(frozen=True)
class VectorCase:
  """Grading and cut-off stabilization of ``L₀`` on one vector."""

  vector: Key
  depth: int
  value: ModuleVector
  preserves_grading: bool
  stabilized: dict[int, bool] = field(default_factory=dict)
  offset_matches: dict[int, bool] = field(default_factory=dict)

  @property
  def passed(self) -> bool:
    return (
      self.preserves_grading
      and all(self.stabilized.values())
      and all(self.offset_matches.values())
    )


def check_vector(ctx: SugawaraContext, v: ModuleVector, cutoffs: Iterable[int]) -> VectorCase:
  value = apply_L0(ctx, v)
  depth = v.depth
  preserves = all(ctx.module.depth(key) == depth for key in value.terms)
  stabilized: dict[int, bool] = {}
  offsets: dict[int, bool] = {}
  for m in cutoffs:
    if m < depth:
      continue
    stabilized[m] = apply_L0_regularized(ctx, v, m) == value
    unordered = apply_L0_regularized(ctx, v, m, ordered=False)
    offsets[m] = unordered == value + regularization_offset(ctx, m) * v
  key = next(iter(v.terms))
  return VectorCase(key, depth, value, preserves, stabilized, offsets)


def check_commutator(
  ctx: SugawaraContext, x: int, n: Sequence[int], v: ModuleVector, central: bool = True
) -> CommutatorCase:
  """Compare ``[x(n), L₀] v`` with the closed form for its branch.

  With ``central`` the commutator is recomputed from the unordered cut-off sum, which
  differs from ``L₀`` by a scalar and so must give the same result.
  """
  lhs = commutator_lhs(ctx, x, n, v)
  if any(n[:-1]):
    branch, rhs = "theorem", commutator_rhs(ctx, x, n, v)
  else:
    branch, rhs = "classical", classical_rhs(ctx, x, n, v)
  cancels: bool | None = None
  if central:
    a = ctx.current(x, n)
    moved = ctx.module.act(a, v)
    m = max(v.depth, moved.depth if not moved.is_zero else 0)
    unordered = ctx.module.act(a, apply_L0_regularized(ctx, v, m, ordered=False))
    unordered = unordered - apply_L0_regularized(ctx, moved, m, ordered=False)
    cancels = unordered == lhs
  return CommutatorCase(
    x=str(ctx.data.basis[x]),
    n=tuple(n),
    vector=next(iter(v.terms)),
    branch=branch,
    lhs=lhs,
    rhs=rhs,
    central_cancellation=cancels,
  )


def verify_grid(
  module: InducedModule, grid: SugawaraGrid
) -> tuple[list[VectorCase], list[CommutatorCase]]:
  """Run every vector and commutator case of the grid; box overflow is an error."""
  ctx = SugawaraContext(module)
  vectors = grid.vectors(module)
  try:
    vector_cases = [check_vector(ctx, v, grid.cutoffs) for v in vectors]
    commutator_cases = [
      check_commutator(ctx, x, n, v)
      for x in grid.elements
      for n in grid.exponents
      for v in vectors
    ]
  except BoxOverflowError as e:
    raise SugawaraError(f"Grid leaves the truncation box: {e}") from None
  return vector_cases, commutator_cases

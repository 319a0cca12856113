"""Elements and bracket of the multi-loop algebra with central elements and derivations.

Basis symbols are ``x ⊗ t^n`` (a Chevalley basis index and an exponent vector of length
``k``), the central elements ``c_1..c_k`` and the derivations ``d_1..d_k``. The bracket is

  [x ⊗ t^n, y ⊗ t^m] = [x, y] ⊗ t^(n+m) + δ_{n+m,0} ⟨x, y⟩ Σ n_i c_i
  [d_i, x ⊗ t^n] = n_i x ⊗ t^n

and every other bracket of basis symbols vanishes.
"""

import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from rich.console import Console
from sympy import isprime

from multiloop.algebra.root_system import ChevalleyElement, RootSystemData
from multiloop.errors import DataError
from multiloop.models import Subalgebra

_console = Console(stderr=True)

MultiIndex = tuple[int, ...]


class LoopAlgebraError(DataError):
  """Invalid loop algebra data or mismatched algebras."""


@dataclass(frozen=True, order=True)
class LoopGenerator:
  """``x ⊗ t^n`` with ``x`` a Chevalley basis index.

  The field order makes the dataclass ordering the PBW order: Cartan elements first
  (their indices come first in the basis), then by exponent vector.
  """

  element: int
  power: MultiIndex


@dataclass(frozen=True, order=True)
class CentralGenerator:
  i: int


@dataclass(frozen=True, order=True)
class DerivationGenerator:
  i: int


Generator = LoopGenerator | CentralGenerator | DerivationGenerator


def generator_key(generator: Generator) -> tuple[int, int, MultiIndex]:
  """Total order on all generator symbols: loop symbols, then c_i, then d_i."""
  if isinstance(generator, LoopGenerator):
    return (0, generator.element, generator.power)
  if isinstance(generator, CentralGenerator):
    return (1, generator.i, ())
  return (2, generator.i, ())


@dataclass(frozen=True)
class AlgebraConfig:
  """Loop rank, level parameter and root system of ``ĝ_k``.

  ``k = 0`` stands for ``g`` itself and is used for the finite-dimensional layer.
  """

  root_system: RootSystemData
  k: int
  p: int = 2
  _brackets: dict[tuple[Generator, Generator], dict[Generator, Fraction]] = field(
    default_factory=dict, repr=False, compare=False, hash=False
  )

  def __post_init__(self) -> None:
    if self.k < 0:
      raise LoopAlgebraError(f"Loop rank must be non-negative, got {self.k}")
    if self.p < 2:
      raise LoopAlgebraError(f"Level parameter p must be at least 2, got {self.p}")
    if not isprime(self.p):
      _console.print(f"[yellow]Warning:[/yellow] p = {self.p} is not prime")

  @property
  def dual_coxeter(self) -> int:
    return self.root_system.dual_coxeter

  def level(self, i: int) -> Fraction:
    """Scalar by which ``c_i`` acts: ``-p^i - h∨``."""
    if not 1 <= i <= self.k:
      raise LoopAlgebraError(f"c_{i} is not defined for k = {self.k}")
    return Fraction(-(self.p**i) - self.dual_coxeter)

  @property
  def level_scalars(self) -> tuple[Fraction, ...]:
    return tuple(self.level(i) for i in range(1, self.k + 1))

  def generator(self, x: ChevalleyElement | int, power: Sequence[int]) -> LoopGenerator:
    index = x if isinstance(x, int) else self.root_system.index(x)
    if not 0 <= index < self.root_system.dim:
      raise LoopAlgebraError(f"Basis index {index} out of range for {self.root_system.name}")
    if len(power) != self.k:
      raise LoopAlgebraError(f"Exponent {tuple(power)} has length {len(power)}, expected {self.k}")
    return LoopGenerator(index, tuple(power))

  def loop(self, x: ChevalleyElement | int, power: Sequence[int]) -> "LoopElement":
    return LoopElement(self, {self.generator(x, power): Fraction(1)})

  def central(self, i: int) -> "LoopElement":
    self._check_index(i)
    return LoopElement(self, {CentralGenerator(i): Fraction(1)})

  def derivation(self, i: int) -> "LoopElement":
    self._check_index(i)
    return LoopElement(self, {DerivationGenerator(i): Fraction(1)})

  def element(self, terms: Mapping[Generator, Fraction | int]) -> "LoopElement":
    return LoopElement(self, {g: Fraction(v) for g, v in terms.items()})

  def zero(self) -> "LoopElement":
    return LoopElement(self, {})

  def _check_index(self, i: int) -> None:
    if not 1 <= i <= self.k:
      raise LoopAlgebraError(f"Index {i} out of range 1..{self.k}")

  def bracket_generators(self, a: Generator, b: Generator) -> dict[Generator, Fraction]:
    """Bracket of two basis symbols (memoized)."""
    key = (a, b)
    cached = self._brackets.get(key)
    if cached is None:
      cached = self._compute_bracket(a, b)
      self._brackets[key] = cached
    return cached

  def _compute_bracket(self, a: Generator, b: Generator) -> dict[Generator, Fraction]:
    if isinstance(a, LoopGenerator) and isinstance(b, LoopGenerator):
      data = self.root_system
      total = tuple(x + y for x, y in zip(a.power, b.power, strict=True))
      out: dict[Generator, Fraction] = {
        LoopGenerator(z, total): c for z, c in data.bracket(a.element, b.element).items()
      }
      if not any(total):
        pairing = data.form(a.element, b.element)
        if pairing:
          for i, n in enumerate(a.power, start=1):
            if n:
              out[CentralGenerator(i)] = pairing * n
      return out
    if isinstance(a, DerivationGenerator) and isinstance(b, LoopGenerator):
      n = b.power[a.i - 1]
      return {b: Fraction(n)} if n else {}
    if isinstance(a, LoopGenerator) and isinstance(b, DerivationGenerator):
      n = a.power[b.i - 1]
      return {a: Fraction(-n)} if n else {}
    return {}

  def degree(self, generator: Generator, i: int) -> int:
    """Eigenvalue of ``ad(d_i)`` on a basis symbol."""
    if isinstance(generator, LoopGenerator):
      return generator.power[i - 1]
    return 0

  def label(self, generator: Generator) -> str:
    if isinstance(generator, CentralGenerator):
      return f"c{generator.i}"
    if isinstance(generator, DerivationGenerator):
      return f"d{generator.i}"
    element = str(self.root_system.basis[generator.element])
    if not generator.power:
      return element
    return f"{element}⊗t^(" + ",".join(str(n) for n in generator.power) + ")"


@dataclass(frozen=True, eq=False)
class LoopElement:
  """Finite rational combination of basis symbols of ``ĝ_k``. Zero terms are dropped."""

  config: AlgebraConfig
  terms: dict[Generator, Fraction]

  def __post_init__(self) -> None:
    object.__setattr__(self, "terms", {g: v for g, v in self.terms.items() if v})

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, LoopElement):
      return NotImplemented
    return self.config == other.config and self.terms == other.terms

  def __hash__(self) -> int:
    return hash(tuple(self.sorted_terms()))

  def __add__(self, other: "LoopElement") -> "LoopElement":
    _check_same(self, other)
    out = dict(self.terms)
    for g, v in other.terms.items():
      out[g] = out.get(g, Fraction(0)) + v
    return LoopElement(self.config, out)

  def __neg__(self) -> "LoopElement":
    return LoopElement(self.config, {g: -v for g, v in self.terms.items()})

  def __sub__(self, other: "LoopElement") -> "LoopElement":
    return self + (-other)

  def __rmul__(self, scalar: Fraction | int) -> "LoopElement":
    return LoopElement(self.config, {g: Fraction(scalar) * v for g, v in self.terms.items()})

  @property
  def is_zero(self) -> bool:
    return not self.terms

  def sorted_terms(self) -> list[tuple[Generator, Fraction]]:
    return sorted(self.terms.items(), key=lambda item: generator_key(item[0]))

  def __str__(self) -> str:
    if not self.terms:
      return "0"
    return " + ".join(f"({v})·{self.config.label(g)}" for g, v in self.sorted_terms())


def _check_same(a: LoopElement, b: LoopElement) -> None:
  if a.config.k != b.config.k or a.config.root_system is not b.config.root_system:
    raise LoopAlgebraError(
      f"Mismatched algebras: k={a.config.k} over {a.config.root_system.name} "
      f"and k={b.config.k} over {b.config.root_system.name}"
    )


def bracket(a: LoopElement, b: LoopElement) -> LoopElement:
  """Lie bracket in ``ĝ_k``, extended bilinearly."""
  _check_same(a, b)
  out: dict[Generator, Fraction] = {}
  for ga, va in a.terms.items():
    for gb, vb in b.terms.items():
      for g, c in a.config.bracket_generators(ga, gb).items():
        out[g] = out.get(g, Fraction(0)) + va * vb * c
  return LoopElement(a.config, out)


def _member(generator: Generator, which: Subalgebra, k: int) -> bool:
  if which == Subalgebra.MINUS:
    return isinstance(generator, LoopGenerator) and generator.power[-1] < 0
  if which == Subalgebra.PLUS:
    return not isinstance(generator, LoopGenerator) or generator.power[-1] >= 0
  if which == Subalgebra.HAT_K:
    return not isinstance(generator, DerivationGenerator) or generator.i == k
  return not isinstance(generator, DerivationGenerator)


def subalgebra_member(a: LoopElement, which: Subalgebra) -> bool:
  """Membership in ``ĝ_k⁻``, ``ĝ_k⁺``, ``g̃_k`` or ``ĝ_k^(k)``."""
  if a.config.k == 0:
    raise LoopAlgebraError("Subalgebras are defined for k >= 1")
  return all(_member(g, which, a.config.k) for g in a.terms)


def generator_member(generator: Generator, which: Subalgebra, k: int) -> bool:
  return _member(generator, which, k)


def anti_involution_generator(config: AlgebraConfig, generator: Generator) -> Generator:
  """``σ`` on a basis symbol: ``e_β⊗t^n ↦ e_{-β}⊗t^{-n}``, ``h_i⊗t^n ↦ h_i⊗t^{-n}``."""
  if not isinstance(generator, LoopGenerator):
    return generator
  data = config.root_system
  element = generator.element
  if not data.is_cartan(element):
    element = data.root_index(tuple(-c for c in data.root_of(element)))
  return LoopGenerator(element, tuple(-n for n in generator.power))


def anti_involution(a: LoopElement) -> LoopElement:
  return LoopElement(
    a.config, {anti_involution_generator(a.config, g): v for g, v in a.terms.items()}
  )


def random_generator(
  config: AlgebraConfig,
  rng: random.Random,
  bound: int = 3,
  which: Subalgebra | None = None,
) -> LoopGenerator:
  """Sample ``x ⊗ t^n`` with ``|n_i| <= bound``; ``which=MINUS`` forces ``n_k < 0``."""
  element = rng.randrange(config.root_system.dim)
  power = [rng.randint(-bound, bound) for _ in range(config.k)]
  if which == Subalgebra.MINUS and config.k:
    power[-1] = rng.randint(-bound, -1)
  return LoopGenerator(element, tuple(power))


def random_element(
  config: AlgebraConfig,
  rng: random.Random,
  bound: int = 3,
  size: int = 3,
  include_central: bool = True,
) -> LoopElement:
  """Random combination of loop symbols, optionally with ``c_i`` and ``d_i`` terms."""
  terms: dict[Generator, Fraction] = {}
  for _ in range(size):
    generator: Generator = random_generator(config, rng, bound)
    if include_central and config.k and rng.random() < 0.2:
      i = rng.randint(1, config.k)
      generator = CentralGenerator(i) if rng.random() < 0.5 else DerivationGenerator(i)
    coefficient = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
    terms[generator] = terms.get(generator, Fraction(0)) + coefficient
  return LoopElement(config, terms)

"""PBW-ordered arithmetic in the enveloping algebra of a graded loop subalgebra.

Monomials are stored as non-decreasing words of loop generators; a repeated generator
stands for its power, so ``(x, x, y)`` is ``x² y``. The rewriter moves an inverted
adjacent pair ``y x`` (``x < y``) to ``x y + [y, x]`` until no inversions remain.
"""

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Any

from multiloop.algebra.codec import (
  ElementFormatError,
  check_header,
  format_fraction,
  generator_from_json,
  generator_to_json,
  parse_fraction,
)
from multiloop.algebra.loop_algebra import (
  AlgebraConfig,
  Generator,
  LoopElement,
  LoopGenerator,
  generator_member,
)
from multiloop.errors import DataError
from multiloop.models import RewriteStrategy, Subalgebra

Word = tuple[LoopGenerator, ...]
Monomial = tuple[tuple[LoopGenerator, int], ...]
Membership = Callable[[LoopGenerator], bool]


class EnvelopingError(DataError):
  """Generator outside the subalgebra or an invalid PBW operation."""


def word_to_monomial(word: Word) -> Monomial:
  """``(x, x, y)`` to ``((x, 2), (y, 1))``."""
  return tuple((g, len(list(group))) for g, group in groupby(word))


def monomial_to_word(monomial: Iterable[tuple[LoopGenerator, int]]) -> Word:
  return tuple(g for g, d in monomial for _ in range(d))


def _accumulate(target: dict[Word, Fraction], word: Word, value: Fraction) -> None:
  total = target.get(word, Fraction(0)) + value
  if total:
    target[word] = total
  else:
    target.pop(word, None)


class PBWAlgebra:
  """Enveloping algebra of the span of the loop generators accepted by ``member``.

  The span must be closed under the bracket and free of central terms; a rewrite that
  produces anything else raises EnvelopingError.
  """

  def __init__(
    self,
    config: AlgebraConfig,
    member: Membership,
    name: str = "subalgebra",
    strategy: RewriteStrategy = RewriteStrategy.RIGHTMOST,
  ):
    self.config = config
    self.member = member
    self.name = name
    self.strategy = strategy
    self._left_products: dict[tuple[LoopGenerator, Word], dict[Word, Fraction]] = {}

  def with_strategy(self, strategy: RewriteStrategy) -> "PBWAlgebra":
    return PBWAlgebra(self.config, self.member, self.name, strategy)

  def check(self, generator: Generator) -> LoopGenerator:
    if not isinstance(generator, LoopGenerator) or not self.member(generator):
      raise EnvelopingError(f"{self.config.label(generator)} is not in {self.name}")
    return generator

  def unit(self) -> "PBWElement":
    return PBWElement(self, {(): Fraction(1)})

  def zero(self) -> "PBWElement":
    return PBWElement(self, {})

  def scalar(self, value: Fraction | int) -> "PBWElement":
    return PBWElement(self, {(): Fraction(value)} if value else {})

  def generator(self, generator: LoopGenerator) -> "PBWElement":
    return PBWElement(self, {(self.check(generator),): Fraction(1)})

  def from_monomials(
    self, terms: Mapping[Monomial, Fraction | int] | Iterable[tuple[Monomial, Fraction | int]]
  ) -> "PBWElement":
    """Build an element from ``(generator, exponent)`` monomials, normal ordering them."""
    items = terms.items() if isinstance(terms, Mapping) else terms
    words: dict[Word, Fraction] = {}
    for monomial, value in items:
      for generator, exponent in monomial:
        self.check(generator)
        if exponent < 1:
          raise EnvelopingError(f"Exponent must be positive, got {exponent}")
      _accumulate(words, monomial_to_word(monomial), Fraction(value))
    return self.rewrite(words)

  def _lie_bracket(self, a: LoopGenerator, b: LoopGenerator) -> dict[LoopGenerator, Fraction]:
    out: dict[LoopGenerator, Fraction] = {}
    for g, v in self.config.bracket_generators(a, b).items():
      if not isinstance(g, LoopGenerator) or not self.member(g):
        raise EnvelopingError(
          f"[{self.config.label(a)}, {self.config.label(b)}] leaves {self.name} "
          f"through {self.config.label(g)}"
        )
      out[g] = v
    return out

  def _inversion(self, word: Word) -> int | None:
    positions = range(len(word) - 2, -1, -1)
    if self.strategy == RewriteStrategy.LEFTMOST:
      positions = range(len(word) - 1)
    for i in positions:
      if word[i + 1] < word[i]:
        return i
    return None

  def rewrite(self, words: Mapping[Word, Fraction]) -> "PBWElement":
    """Normal order a combination of arbitrary words."""
    pending = {w: v for w, v in words.items() if v}
    result: dict[Word, Fraction] = {}
    while pending:
      word, value = pending.popitem()
      i = self._inversion(word)
      if i is None:
        _accumulate(result, word, value)
        continue
      a, b = word[i], word[i + 1]
      _accumulate(pending, word[:i] + (b, a) + word[i + 2 :], value)
      for g, c in self._lie_bracket(a, b).items():
        _accumulate(pending, word[:i] + (g,) + word[i + 2 :], value * c)
    return PBWElement(self, result)

  def left_multiply(self, generator: LoopGenerator, word: Word) -> dict[Word, Fraction]:
    """Normal form of ``generator · word`` for an ordered ``word`` (memoized)."""
    key = (generator, word)
    cached = self._left_products.get(key)
    if cached is None:
      cached = dict(self.rewrite({(generator,) + word: Fraction(1)}).terms)
      self._left_products[key] = cached
    return cached

  def normal_order(self, product: Sequence[LoopElement | LoopGenerator]) -> "PBWElement":
    """Expand a product of Lie algebra elements and bring it to PBW normal form."""
    words: dict[Word, Fraction] = {(): Fraction(1)}
    for factor in product:
      terms: Mapping[Generator, Fraction]
      if isinstance(factor, LoopElement):
        terms = factor.terms
      else:
        terms = {factor: Fraction(1)}
      expanded: dict[Word, Fraction] = {}
      for word, value in words.items():
        for generator, c in terms.items():
          _accumulate(expanded, word + (self.check(generator),), value * c)
      words = expanded
    return self.rewrite(words)


def minus_algebra(
  config: AlgebraConfig, strategy: RewriteStrategy = RewriteStrategy.RIGHTMOST
) -> PBWAlgebra:
  """``U(ĝ_k⁻)``: generators with negative ``t_k`` exponent."""
  if config.k < 1:
    raise EnvelopingError("ĝ_k⁻ needs k >= 1")
  k = config.k
  return PBWAlgebra(
    config, lambda g: generator_member(g, Subalgebra.MINUS, k), f"U(ĝ_{k}⁻)", strategy
  )


def lowering_algebra(config: AlgebraConfig) -> PBWAlgebra:
  """``U(n⁻)`` of the finite-dimensional algebra (``k = 0``)."""
  data = config.root_system
  return PBWAlgebra(
    config,
    lambda g: not data.is_cartan(g.element) and sum(data.root_of(g.element)) < 0,
    "U(n⁻)",
  )


@dataclass(frozen=True, eq=False)
class PBWElement:
  """Rational combination of ordered monomials."""

  algebra: PBWAlgebra
  terms: dict[Word, Fraction]

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, PBWElement):
      return NotImplemented
    return self.terms == other.terms

  def __hash__(self) -> int:
    return hash(tuple(sorted(self.terms.items())))

  def __add__(self, other: "PBWElement") -> "PBWElement":
    out = dict(self.terms)
    for w, v in other.terms.items():
      _accumulate(out, w, v)
    return PBWElement(self.algebra, out)

  def __neg__(self) -> "PBWElement":
    return PBWElement(self.algebra, {w: -v for w, v in self.terms.items()})

  def __sub__(self, other: "PBWElement") -> "PBWElement":
    return self + (-other)

  def __rmul__(self, scalar: Fraction | int) -> "PBWElement":
    if not scalar:
      return self.algebra.zero()
    return PBWElement(self.algebra, {w: Fraction(scalar) * v for w, v in self.terms.items()})

  def __mul__(self, other: "PBWElement") -> "PBWElement":
    return multiply(self, other)

  @property
  def is_zero(self) -> bool:
    return not self.terms

  @property
  def degree(self) -> int:
    """Filtration degree ``max |d|``; zero for the zero element."""
    return max((len(w) for w in self.terms), default=0)

  @property
  def is_constant(self) -> bool:
    return all(not w for w in self.terms)

  @property
  def is_homogeneous(self) -> bool:
    return len({len(w) for w in self.terms}) <= 1

  def coefficient(self, word: Word) -> Fraction:
    return self.terms.get(word, Fraction(0))

  def monomials(self) -> list[tuple[Monomial, Fraction]]:
    return [(word_to_monomial(w), v) for w, v in sorted(self.terms.items())]

  def generators(self) -> list[LoopGenerator]:
    """Distinct generators occurring in the element, in PBW order."""
    return sorted({g for w in self.terms for g in w})

  def __str__(self) -> str:
    if not self.terms:
      return "0"
    label = self.algebra.config.label
    parts = []
    for monomial, value in self.monomials():
      factors = "·".join(
        label(g) if d == 1 else f"({label(g)})^{d}" for g, d in monomial
      )
      parts.append(f"({value})" + (f"·{factors}" if factors else ""))
    return " + ".join(parts)


def normal_order(algebra: PBWAlgebra, product: Sequence[LoopElement | LoopGenerator]) -> PBWElement:
  return algebra.normal_order(product)


def multiply(left: PBWElement, right: PBWElement) -> PBWElement:
  words: dict[Word, Fraction] = {}
  for wl, vl in left.terms.items():
    for wr, vr in right.terms.items():
      _accumulate(words, wl + wr, vl * vr)
  return left.algebra.rewrite(words)


def top_component(z: PBWElement) -> PBWElement:
  """Sum of the monomials of maximal filtration degree."""
  if z.is_zero:
    raise EnvelopingError("top component of the zero element is undefined")
  degree = z.degree
  return PBWElement(z.algebra, {w: v for w, v in z.terms.items() if len(w) == degree})


def _as_terms(a: LoopElement | Generator) -> Mapping[Generator, Fraction]:
  if isinstance(a, LoopElement):
    return a.terms
  return {a: Fraction(1)}


def _checked_bracket(
  algebra: PBWAlgebra, a: Generator, x: LoopGenerator
) -> dict[LoopGenerator, Fraction]:
  out: dict[LoopGenerator, Fraction] = {}
  for g, v in algebra.config.bracket_generators(a, x).items():
    if not isinstance(g, LoopGenerator) or not algebra.member(g):
      raise EnvelopingError(
        f"[{algebra.config.label(a)}, {algebra.config.label(x)}] has a component "
        f"{algebra.config.label(g)} outside {algebra.name}"
      )
    out[g] = v
  return out


def commutator(a: LoopElement | Generator, z: PBWElement) -> PBWElement:
  """Full commutator ``[a, Z]`` in U: ``ad(a)`` applied factor by factor, then normal ordered.

  ``a`` itself need not lie in the subalgebra, but every ``[a, x_i]`` must.
  """
  algebra = z.algebra
  words: dict[Word, Fraction] = {}
  for generator, coefficient in _as_terms(a).items():
    for word, value in z.terms.items():
      for i, x in enumerate(word):
        for g, c in _checked_bracket(algebra, generator, x).items():
          _accumulate(words, word[:i] + (g,) + word[i + 1 :], coefficient * value * c)
  return algebra.rewrite(words)


def graded_multiply(left: PBWElement, right: PBWElement) -> PBWElement:
  """Product in the associated graded algebra, where generators commute."""
  words: dict[Word, Fraction] = {}
  for wl, vl in left.terms.items():
    for wr, vr in right.terms.items():
      _accumulate(words, tuple(sorted(wl + wr)), vl * vr)
  return PBWElement(left.algebra, words)


def graded_commutator_component(a: LoopElement | Generator, z0: PBWElement) -> PBWElement:
  """Degree-``d`` part of ``[a, Z0]`` for homogeneous ``Z0`` of degree ``d``.

  Computed in the associated graded algebra: each factor ``x_i`` with exponent ``d_i``
  contributes ``d_i · x^{d-δ_i} · [a, x_i]``.
  """
  if not z0.is_homogeneous:
    raise EnvelopingError("graded commutator needs a homogeneous element")
  algebra = z0.algebra
  words: dict[Word, Fraction] = {}
  for generator, coefficient in _as_terms(a).items():
    for word, value in z0.terms.items():
      for x, exponent in word_to_monomial(word):
        rest = list(word)
        rest.remove(x)
        for g, c in _checked_bracket(algebra, generator, x).items():
          target = tuple(sorted(rest + [g]))
          _accumulate(words, target, coefficient * value * exponent * c)
  return PBWElement(algebra, words)


def pbw_from_json(algebra: PBWAlgebra, value: Any, path: str = "$") -> PBWElement:
  """Parse ``{"monomials": [{"coeff": "2", "factors": [[gen, exponent], ...]}, ...]}``."""
  config = algebra.config
  check_header(config, value, path)
  items = value.get("monomials")
  if not isinstance(items, list):
    raise ElementFormatError(f"{path}.monomials: expected a list")
  monomials: list[tuple[Monomial, Fraction]] = []
  for i, item in enumerate(items):
    item_path = f"{path}.monomials[{i}]"
    if not isinstance(item, dict) or "coeff" not in item or "factors" not in item:
      raise ElementFormatError(f"{item_path}: expected an object with 'coeff' and 'factors'")
    coefficient = parse_fraction(item["coeff"], f"{item_path}.coeff")
    if not isinstance(item["factors"], list):
      raise ElementFormatError(f"{item_path}.factors: expected a list")
    monomial: list[tuple[LoopGenerator, int]] = []
    for j, factor in enumerate(item["factors"]):
      factor_path = f"{item_path}.factors[{j}]"
      if not isinstance(factor, list) or len(factor) != 2:
        raise ElementFormatError(f"{factor_path}: expected [generator, exponent]")
      generator = generator_from_json(config, factor[0], f"{factor_path}[0]")
      exponent = factor[1]
      if not isinstance(generator, LoopGenerator) or not algebra.member(generator):
        raise ElementFormatError(f"{factor_path}[0]: generator is not in {algebra.name}")
      if not isinstance(exponent, int) or isinstance(exponent, bool) or exponent < 1:
        raise ElementFormatError(f"{factor_path}[1]: exponent must be a positive integer")
      monomial.append((generator, exponent))
    monomials.append((tuple(monomial), coefficient))
  return algebra.from_monomials(monomials)


def pbw_to_json(z: PBWElement) -> dict[str, Any]:
  config = z.algebra.config
  return {
    "alg": config.root_system.name,
    "k": config.k,
    "monomials": [
      {
        "coeff": format_fraction(value),
        "factors": [[generator_to_json(config, g), d] for g, d in monomial],
      }
      for monomial, value in z.monomials()
    ],
  }

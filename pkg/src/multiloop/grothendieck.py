"""The ``E^k_λ`` recursion in the Grothendieck group of ``g``-modules.

``E⁰_λ`` is the class of the Weyl module ``V(λ)``. With ``λ = Σ_r p^r λ_r`` the base-``p``
expansion, ``σ = λ_0 + p λ_1 + … + p^{k-2} λ_{k-2}`` and ``q = p^{k-1}``,

  ``E^k_λ = Σ_{μ ∈ X₊, μ - σ ∈ qX} P_{(μ-σ)/q, (λ-σ)/q} E^{k-1}_μ``.

``P`` is external data. Entries are looked up for every dominant ``ν`` below the column
index in the dominance order and for every entry the file declares in that column. A
missing entry is an error unless the file marks a box in which it is complete.
"""

import itertools
import json
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any

from rich.console import Console

from multiloop.algebra.root_system import (
  RootSystemData,
  Weight,
  build_root_system,
  parse_algebra,
  weyl_dimension,
  weyl_group,
)
from multiloop.errors import DataError

_console = Console(stderr=True)
_weyl_group = lru_cache(maxsize=None)(weyl_group)


class GrothendieckError(DataError):
  """Invalid weight or P-matrix data."""


class DataGapError(GrothendieckError):
  """A P-matrix entry needed by the recursion is missing."""


def _clean(terms: Mapping[Weight, int]) -> dict[Weight, int]:
  return {w: v for w, v in sorted(terms.items()) if v}


@dataclass(frozen=True, eq=False)
class WeightCombination:
  """Finitely supported integer combination indexed by weights."""

  terms: dict[Weight, int] = field(default_factory=dict)

  def __post_init__(self) -> None:
    object.__setattr__(self, "terms", _clean(self.terms))

  def __eq__(self, other: object) -> bool:
    if not isinstance(other, WeightCombination):
      return NotImplemented
    return type(self) is type(other) and self.terms == other.terms

  def __hash__(self) -> int:
    return hash(tuple(self.terms.items()))

  def _combine(self, other: "WeightCombination", sign: int) -> dict[Weight, int]:
    out = dict(self.terms)
    for w, v in other.terms.items():
      out[w] = out.get(w, 0) + sign * v
    return out

  @property
  def is_zero(self) -> bool:
    return not self.terms

  def to_json(self) -> list[dict[str, Any]]:
    return [{"weight": list(w), "coeff": v} for w, v in self.terms.items()]


class GrothendieckVector(WeightCombination):
  """``Σ c_μ E⁰_μ`` over dominant ``μ``."""

  def __add__(self, other: "GrothendieckVector") -> "GrothendieckVector":
    return GrothendieckVector(self._combine(other, 1))

  def __sub__(self, other: "GrothendieckVector") -> "GrothendieckVector":
    return GrothendieckVector(self._combine(other, -1))

  def __rmul__(self, scalar: int) -> "GrothendieckVector":
    return GrothendieckVector({w: scalar * v for w, v in self.terms.items()})


class CharacterPolynomial(WeightCombination):
  """Formal character ``Σ m_μ e^μ``."""

  def __add__(self, other: "CharacterPolynomial") -> "CharacterPolynomial":
    return CharacterPolynomial(self._combine(other, 1))

  def __sub__(self, other: "CharacterPolynomial") -> "CharacterPolynomial":
    return CharacterPolynomial(self._combine(other, -1))

  def __rmul__(self, scalar: int) -> "CharacterPolynomial":
    return CharacterPolynomial({w: scalar * v for w, v in self.terms.items()})

  @property
  def dimension(self) -> int:
    """Value at ``e^μ = 1``."""
    return sum(self.terms.values())


def _check_dominant(data: RootSystemData, weight: Sequence[int]) -> Weight:
  if len(weight) != data.rank:
    raise GrothendieckError(
      f"Weight {tuple(weight)} has length {len(weight)}, expected {data.rank}"
    )
  if any(w < 0 for w in weight):
    raise GrothendieckError(f"Weight {tuple(weight)} is not dominant")
  return tuple(weight)


def is_restricted(weight: Sequence[int], p: int) -> bool:
  """Every fundamental coordinate is below ``p``."""
  if any(w < 0 for w in weight):
    raise GrothendieckError(f"Weight {tuple(weight)} is not dominant")
  return all(w < p for w in weight)


def p_adic_expansion(weight: Sequence[int], p: int) -> list[Weight]:
  """Restricted digits ``λ_0, λ_1, …`` with ``λ = Σ p^r λ_r``; at least one digit."""
  if any(w < 0 for w in weight):
    raise GrothendieckError(f"Weight {tuple(weight)} is not dominant")
  if p < 2:
    raise GrothendieckError(f"p must be at least 2, got {p}")
  rest = list(weight)
  digits: list[Weight] = []
  while True:
    digits.append(tuple(w % p for w in rest))
    rest = [w // p for w in rest]
    if not any(rest):
      return digits


def prefix(weight: Sequence[int], p: int, k: int) -> Weight:
  """``σ = Σ_{r <= k-2} p^r λ_r``."""
  digits = p_adic_expansion(weight, p)
  total = [0] * len(weight)
  for r, digit in enumerate(digits[: max(k - 1, 0)]):
    for i, d in enumerate(digit):
      total[i] += p**r * d
  return tuple(total)


def dominant_below(data: RootSystemData, weight: Sequence[int]) -> list[Weight]:
  """Dominant ``ν`` with ``λ - ν`` a non-negative integer combination of simple roots."""
  top = _check_dominant(data, weight)
  bounds = [
    sum((data.form_matrix[i][j] * top[j] for j in range(data.rank)), Fraction(0))
    for i in range(data.rank)
  ]
  found = []
  for c in itertools.product(*(range(int(b) + 1) for b in bounds)):
    nu = tuple(
      top[i] - sum(data.cartan_matrix[i][j] * c[j] for j in range(data.rank))
      for i in range(data.rank)
    )
    if all(v >= 0 for v in nu):
      found.append(nu)
  return sorted(found, reverse=True)


@dataclass(frozen=True)
class PMatrix:
  """Sparse integer matrix ``P_{μ,λ}`` with an optional completeness box."""

  root_system: RootSystemData
  p: int
  entries: dict[tuple[Weight, Weight], int]
  complete_min: Weight | None = None
  complete_max: Weight | None = None

  def _in_box(self, weight: Weight) -> bool:
    if self.complete_min is None or self.complete_max is None:
      return False
    return all(a <= w <= b for a, w, b in zip(self.complete_min, weight, self.complete_max))

  def get(self, mu: Weight, lam: Weight) -> int:
    value = self.entries.get((mu, lam))
    if value is not None:
      return value
    if self._in_box(mu) and self._in_box(lam):
      return 0
    raise DataGapError(f"P[{list(mu)}, {list(lam)}] is missing and not covered by complete_on")

  def column(self, lam: Weight) -> dict[Weight, int]:
    """Entries of column ``λ`` over the required indices, missing ones reported."""
    indices = set(dominant_below(self.root_system, lam))
    indices.update(mu for mu, other in self.entries if other == lam)
    return {mu: self.get(mu, lam) for mu in sorted(indices, reverse=True)}

  def diagonal_warnings(self) -> list[str]:
    return [
      f"P[{list(mu)}, {list(lam)}] = {value}, expected 1 on the diagonal"
      for (mu, lam), value in sorted(self.entries.items())
      if mu == lam and value != 1
    ]

  def to_json(self) -> dict[str, Any]:
    out: dict[str, Any] = {
      "alg": self.root_system.name,
      "p": self.p,
      "entries": [
        {"mu": list(mu), "lambda": list(lam), "value": value}
        for (mu, lam), value in sorted(self.entries.items())
      ],
    }
    if self.complete_min is not None and self.complete_max is not None:
      out["complete_on"] = {"min": list(self.complete_min), "max": list(self.complete_max)}
    return out


def _weight(data: RootSystemData, value: Any, path: str) -> Weight:
  if isinstance(value, int) and not isinstance(value, bool) and data.rank == 1:
    value = [value]
  if not isinstance(value, list) or not all(
    isinstance(v, int) and not isinstance(v, bool) for v in value
  ):
    raise GrothendieckError(f"{path}: expected a list of integers, got {value!r}")
  if len(value) != data.rank:
    raise GrothendieckError(f"{path}: expected {data.rank} coordinates, got {len(value)}")
  return tuple(value)


def pmatrix_from_json(value: Any) -> PMatrix:
  if not isinstance(value, dict):
    raise GrothendieckError("P matrix must be a JSON object")
  try:
    series, rank = parse_algebra(str(value["alg"]))
    p = value["p"]
    items = value["entries"]
  except KeyError as e:
    raise GrothendieckError(f"P matrix is missing key {e}") from None
  if not isinstance(p, int) or p < 2:
    raise GrothendieckError(f"p: expected an integer >= 2, got {p!r}")
  if not isinstance(items, list):
    raise GrothendieckError("entries: expected a list")
  data = build_root_system(series, rank)
  entries: dict[tuple[Weight, Weight], int] = {}
  for i, item in enumerate(items):
    path = f"entries[{i}]"
    if not isinstance(item, dict):
      raise GrothendieckError(f"{path}: expected an object")
    mu = _weight(data, item.get("mu"), f"{path}.mu")
    lam = _weight(data, item.get("lambda"), f"{path}.lambda")
    entry = item.get("value")
    if not isinstance(entry, int) or isinstance(entry, bool):
      raise GrothendieckError(f"{path}.value: expected an integer, got {entry!r}")
    entries[(mu, lam)] = entries.get((mu, lam), 0) + entry
  complete_min = complete_max = None
  if "complete_on" in value:
    box = value["complete_on"]
    if not isinstance(box, dict):
      raise GrothendieckError("complete_on: expected an object with 'min' and 'max'")
    complete_min = _weight(data, box.get("min"), "complete_on.min")
    complete_max = _weight(data, box.get("max"), "complete_on.max")
  matrix = PMatrix(data, p, entries, complete_min, complete_max)
  for warning in matrix.diagonal_warnings():
    _console.print(f"[yellow]Warning:[/yellow] {warning}")
  return matrix


def load_pmatrix(path: Path) -> PMatrix:
  try:
    value = json.loads(path.read_text())
  except json.JSONDecodeError as e:
    raise GrothendieckError(f"{path}: invalid JSON: {e}") from None
  return pmatrix_from_json(value)


def identity_pmatrix(data: RootSystemData, p: int, bound: int) -> PMatrix:
  """``P = 1`` on dominant weights with coordinates ``<= bound``, complete on that box."""
  weights = itertools.product(range(bound + 1), repeat=data.rank)
  return PMatrix(
    data,
    p,
    {(w, w): 1 for w in weights},
    complete_min=(0,) * data.rank,
    complete_max=(bound,) * data.rank,
  )


def theta_bound(data: RootSystemData, weight: Sequence[int]) -> int:
  """``⟨λ, θ∨⟩``, an upper bound for every coordinate of a dominant ``μ <= λ``."""
  return sum(c * w for c, w in zip(data.highest_root, weight, strict=True))


def e_zero(weight: Sequence[int]) -> GrothendieckVector:
  return GrothendieckVector({tuple(weight): 1})


def ek_step(
  k: int,
  weight: Sequence[int],
  pmatrix: PMatrix,
  expand_prev: Callable[[Weight], GrothendieckVector],
) -> GrothendieckVector:
  """``E^k_λ`` from the ``E^{k-1}_μ`` returned by ``expand_prev``."""
  if k < 1:
    raise GrothendieckError(f"ek_step needs k >= 1, got {k}")
  data = pmatrix.root_system
  lam = _check_dominant(data, weight)
  p = pmatrix.p
  sigma = prefix(lam, p, k)
  q = p ** (k - 1)
  reduced = tuple((a - s) // q for a, s in zip(lam, sigma, strict=True))
  total = GrothendieckVector()
  for nu, value in pmatrix.column(reduced).items():
    if value:
      mu = tuple(s + q * n for s, n in zip(sigma, nu, strict=True))
      total = total + value * expand_prev(mu)
  return total


def _expander(pmatrix: PMatrix) -> Callable[[int, Weight], GrothendieckVector]:
  @lru_cache(maxsize=None)
  def expand(level: int, mu: Weight) -> GrothendieckVector:
    if level == 0:
      return e_zero(mu)
    return ek_step(level, mu, pmatrix, lambda nu: expand(level - 1, nu))

  return expand


def e_k(weight: Sequence[int], k: int, pmatrix: PMatrix) -> GrothendieckVector:
  """``E^k_λ`` written in the ``E⁰`` basis."""
  if k < 0:
    raise GrothendieckError(f"k must be non-negative, got {k}")
  return _expander(pmatrix)(k, _check_dominant(pmatrix.root_system, weight))


@dataclass(frozen=True)
class Stabilization:
  """``E^k_λ`` for ``k = 0, 1, …`` until two consecutive values agree."""

  history: list[GrothendieckVector]
  k_stable: int | None

  @property
  def value(self) -> GrothendieckVector:
    return self.history[-1]


def stabilize(weight: Sequence[int], pmatrix: PMatrix, k_max: int) -> Stabilization:
  lam = _check_dominant(pmatrix.root_system, weight)
  expand = _expander(pmatrix)
  history = [expand(0, lam)]
  for k in range(1, k_max + 1):
    history.append(expand(k, lam))
    if history[-1] == history[-2]:
      return Stabilization(history, k)
  return Stabilization(history, None)


@dataclass(frozen=True)
class TransitionCheck:
  """Shape of ``E^{k-1} → E^k`` on one column."""

  weight: Weight
  diagonal: int
  off_pattern: list[Weight]

  @property
  def passed(self) -> bool:
    return self.diagonal == 1 and not self.off_pattern


def transition_check(weights: Sequence[Weight], k: int, pmatrix: PMatrix) -> list[TransitionCheck]:
  """Unitriangularity and the ``μ - σ ∈ p^{k-1}X`` support of each column."""
  data = pmatrix.root_system
  q = pmatrix.p ** (k - 1)
  out = []
  for lam in weights:
    column = ek_step(k, lam, pmatrix, e_zero)
    sigma = prefix(lam, pmatrix.p, k)
    below = set(dominant_below(data, lam))
    off = [
      mu
      for mu in column.terms
      if mu not in below or any((m - s) % q for m, s in zip(mu, sigma, strict=True))
    ]
    out.append(TransitionCheck(lam, column.terms.get(lam, 0), off))
  return out


@lru_cache(maxsize=None)
def _kostant(data: RootSystemData, beta: tuple[int, ...], start: int) -> int:
  """Ways to write ``β`` (simple-root coordinates) as a sum of positive roots from ``start``."""
  if not any(beta):
    return 1
  if any(b < 0 for b in beta):
    return 0
  roots = data.positive_roots
  total = 0
  for i in range(start, len(roots)):
    rest = tuple(b - r for b, r in zip(beta, roots[i], strict=True))
    if all(b >= 0 for b in rest):
      total += _kostant(data, rest, i)
  return total


def _root_coordinates(data: RootSystemData, weight: Sequence[int]) -> tuple[int, ...] | None:
  coords = [
    sum((data.form_matrix[i][j] * weight[j] for j in range(data.rank)), Fraction(0))
    for i in range(data.rank)
  ]
  if any(c.denominator != 1 for c in coords):
    return None
  return tuple(int(c) for c in coords)


def dominant_multiplicity(data: RootSystemData, weight: Weight, mu: Weight) -> int:
  """Multiplicity of ``μ`` in ``V(λ)`` as ``Σ_w sign(w) 𝒫(w(λ+ρ) - (μ+ρ))``."""
  shifted = tuple(a + r for a, r in zip(weight, data.rho, strict=True))
  target = tuple(m + r for m, r in zip(mu, data.rho, strict=True))
  total = 0
  for w in _weyl_group(data):
    image = w.apply(shifted)
    beta = _root_coordinates(data, [a - b for a, b in zip(image, target, strict=True)])
    if beta is not None and all(b >= 0 for b in beta):
      total += w.sign * _kostant(data, beta, 0)
  return total


def _orbit(data: RootSystemData, weight: Weight) -> Iterator[Weight]:
  seen: set[Weight] = set()
  for w in _weyl_group(data):
    image = w.apply(weight)
    if image not in seen:
      seen.add(image)
      yield image


def weyl_character(data: RootSystemData, weight: Sequence[int]) -> CharacterPolynomial:
  """Character of ``V(λ)`` from the alternating sum over the Weyl group."""
  lam = _check_dominant(data, weight)
  terms: dict[Weight, int] = {}
  for mu in dominant_below(data, lam):
    multiplicity = dominant_multiplicity(data, lam, mu)
    if multiplicity:
      for image in _orbit(data, mu):
        terms[image] = multiplicity
  character = CharacterPolynomial(terms)
  if character.dimension != weyl_dimension(data, lam):
    raise GrothendieckError(f"Character of {lam} does not match the Weyl dimension formula")
  return character


def character_of(data: RootSystemData, vector: GrothendieckVector) -> CharacterPolynomial:
  total = CharacterPolynomial()
  for mu, coefficient in vector.terms.items():
    total = total + coefficient * weyl_character(data, mu)
  return total

"""Witness certificates for ``[g ⊗ t_{k-1}^r, Z] ≠ 0`` with non-constant ``Z ∈ U(ĝ_k⁻)``.

Given ``Z``, take its top homogeneous component ``Z⁰`` and list the generators occurring
in it as ``x_1 < ... < x_n`` in PBW order, the first ``m`` of them Cartan type. A
greedy lexicographic maximization picks one monomial ``x^d̄`` of ``Z⁰``:

  * Case I (``m < n``): maximize ``d_{m+1}``, then the Cartan part ``(d_1..d_m)``,
    then ``d_{m+2}, ..., d_n`` in turn. With ``k̄`` the last non-zero position,
    ``x_k̄ = e_β ⊗ t^n`` and the witness is the coroot ``h_o`` of ``±β``.
  * Case II (``m = n``): maximize ``d_1, ..., d_m`` in turn. ``x_k̄ = h_i ⊗ t^n`` and
    the witness is ``e_{α_i}``.

For ``r >= p0`` the monomial ``A = x^{d̄-δ_k̄} · [witness, x_k̄] ⊗ t_{k-1}^r`` occurs in the
top component of ``[witness ⊗ t_{k-1}^r, Z]`` with a predictable non-zero coefficient.
"""

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from multiloop.algebra.loop_algebra import AlgebraConfig, LoopElement, LoopGenerator
from multiloop.algebra.root_system import GVector, build_root_system, parse_algebra
from multiloop.enveloping import (
  PBWElement,
  Word,
  commutator,
  graded_commutator_component,
  minus_algebra,
  pbw_from_json,
  pbw_to_json,
  top_component,
)
from multiloop.errors import DataError, VerificationError
from multiloop.models import WitnessCase

if TYPE_CHECKING:
  from multiloop.modules.base import Key, ModuleVector
  from multiloop.modules.induced import InducedModule


class CertificateError(DataError):
  """Input outside the certificate's preconditions."""


class CertificateFailure(VerificationError):
  """The commutator vanished inside a verified window."""


@dataclass(frozen=True)
class WitnessCertificate:
  """Witness direction, selected monomial and threshold ``p0`` for one ``Z``."""

  case: WitnessCase
  witness: GVector
  generators: tuple[LoopGenerator, ...]
  exponents: tuple[int, ...]
  pivot: int
  top_coefficient: Fraction
  root_value: Fraction
  target_element: int
  p0: int
  k: int

  @property
  def pivot_generator(self) -> LoopGenerator:
    return self.generators[self.pivot]

  def witness_element(self, config: AlgebraConfig, r: int) -> LoopElement:
    """``witness ⊗ t_{k-1}^r``."""
    power = tuple(r if i == self.k - 2 else 0 for i in range(self.k))
    return LoopElement(config, {LoopGenerator(i, power): v for i, v in self.witness.items()})

  def target(self, r: int) -> Word:
    """The monomial ``A`` whose coefficient is predicted, for shift ``r``."""
    pivot = self.pivot_generator
    shifted = tuple(n + r if i == self.k - 2 else n for i, n in enumerate(pivot.power))
    factors = [g for g, d in zip(self.generators, self.exponents, strict=True) for _ in range(d)]
    factors.remove(pivot)
    factors.append(LoopGenerator(self.target_element, shifted))
    return tuple(sorted(factors))


def predicted_coefficient(cert: WitnessCertificate) -> Fraction:
  """``c_d̄ · d̄_k̄ · β(h_o)`` in Case I and ``-c_d̄ · d̄_k̄`` in Case II."""
  return cert.top_coefficient * cert.exponents[cert.pivot] * cert.root_value


def _greedy(candidates: list[tuple[tuple[int, ...], Fraction]], positions: Iterable[int]) -> None:
  for j in positions:
    best = max(exps[j] for exps, _ in candidates)
    candidates[:] = [(exps, c) for exps, c in candidates if exps[j] == best]


def analyze(z: PBWElement) -> WitnessCertificate:
  """Build the certificate for a non-constant ``Z ∈ U(ĝ_k⁻)``, ``k >= 2``."""
  config = z.algebra.config
  data = config.root_system
  k = config.k
  if k < 2:
    raise CertificateError(f"Certificates need k >= 2, got k = {k}")
  if z.is_zero or z.is_constant:
    raise CertificateError("Z is constant; the commutator argument needs degree >= 1")
  for g in z.generators():
    if g.power[-1] >= 0:
      raise CertificateError(f"{config.label(g)} is not in ĝ_{k}⁻")

  top = top_component(z)
  generators = tuple(top.generators())
  m = sum(1 for g in generators if data.is_cartan(g.element))
  n = len(generators)
  candidates = [
    (tuple(word.count(g) for g in generators), value) for word, value in top.terms.items()
  ]

  if m < n:
    case = WitnessCase.CARTAN_FREE
    _greedy(candidates, [m])
    best_cartan = max(exps[:m] for exps, _ in candidates)
    candidates = [(exps, c) for exps, c in candidates if exps[:m] == best_cartan]
    _greedy(candidates, range(m + 1, n))
  else:
    case = WitnessCase.CARTAN_ONLY
    _greedy(candidates, range(m))
  [(exponents, top_coefficient)] = candidates
  pivot = max(j for j, d in enumerate(exponents) if d)
  x = generators[pivot]

  if case == WitnessCase.CARTAN_FREE:
    beta = data.root_of(x.element)
    positive = beta if sum(beta) > 0 else tuple(-c for c in beta)
    witness = data.coroot(positive)
    root_value = sum((v * beta[i] for i, v in witness.items()), Fraction(0))
    target_element = x.element
  else:
    simple = tuple(1 if j == x.element else 0 for j in range(data.rank))
    target_element = data.root_index(simple)
    witness = {target_element: Fraction(1)}
    root_value = Fraction(-1)

  spread = max(abs(g.power[k - 2]) for g in z.generators())
  return WitnessCertificate(
    case=case,
    witness=witness,
    generators=generators,
    exponents=exponents,
    pivot=pivot,
    top_coefficient=top_coefficient,
    root_value=root_value,
    target_element=target_element,
    p0=1 + 2 * spread,
    k=k,
  )


@dataclass(frozen=True)
class WindowResult:
  """Outcome of one shift ``r``."""

  r: int
  coefficient: Fraction
  expected: Fraction
  degree: int
  graded_match: bool
  terms: int

  @property
  def passed(self) -> bool:
    return self.terms > 0 and self.coefficient == self.expected and self.graded_match


def verify(z: PBWElement, cert: WitnessCertificate, r_values: Iterable[int]) -> list[WindowResult]:
  """Compute ``[witness ⊗ t_{k-1}^r, Z]`` exactly in U for each ``r``.

  Raises CertificateFailure as soon as a commutator vanishes.
  """
  config = z.algebra.config
  expected = predicted_coefficient(cert)
  graded_source = top_component(z)
  results = []
  for r in r_values:
    if r < cert.p0:
      raise CertificateError(f"r = {r} is below p0 = {cert.p0}")
    a = cert.witness_element(config, r)
    full = commutator(a, z)
    if full.is_zero:
      raise CertificateFailure(f"[witness ⊗ t^{r}, Z] vanished for r = {r}; certificate is false")
    top = top_component(full)
    graded = graded_commutator_component(a, graded_source)
    degree = top.degree
    results.append(
      WindowResult(
        r=r,
        coefficient=top.coefficient(cert.target(r)) if degree == z.degree else Fraction(0),
        expected=expected,
        degree=degree,
        graded_match=(graded == top) if degree == z.degree else graded.is_zero,
        terms=len(full.terms),
      )
    )
  return results


def certificate_to_json(cert: WitnessCertificate, config: AlgebraConfig) -> dict[str, Any]:
  data = config.root_system
  return {
    "case": cert.case.value,
    "witness": {str(data.basis[i]): str(v) for i, v in sorted(cert.witness.items())},
    "generators": [config.label(g) for g in cert.generators],
    "exponents": list(cert.exponents),
    "pivot": cert.pivot + 1,
    "target_generator": str(data.basis[cert.target_element]),
    "top_coefficient": str(cert.top_coefficient),
    "predicted_coefficient": str(predicted_coefficient(cert)),
    "p0": cert.p0,
  }


@dataclass
class CorpusEntry:
  """One element of a commutator corpus with the algebra it lives in."""

  alg: str
  k: int
  z: dict[str, Any]
  label: str = field(default="")

  def to_json(self) -> dict[str, Any]:
    return {"label": self.label, "alg": self.alg, "k": self.k, "z": self.z}


def corpus_config(alg: str, k: int, p: int = 2) -> AlgebraConfig:
  series, rank = parse_algebra(alg)
  return AlgebraConfig(build_root_system(series, rank), k, p)


def load_entry(entry: CorpusEntry, config: AlgebraConfig | None = None) -> PBWElement:
  config = config or corpus_config(entry.alg, entry.k)
  return pbw_from_json(minus_algebra(config), entry.z, path=f"{entry.label or 'z'}")


def random_corpus(
  seed: int,
  size: int,
  algebras: Sequence[str] = ("A1", "A2"),
  ks: Sequence[int] = (2, 3),
  degree: int = 3,
  bound: int = 3,
  max_monomials: int = 4,
) -> list[CorpusEntry]:
  """Seeded non-constant elements of ``U(ĝ_k⁻)``.

  Each element is a sum of at most ``max_monomials`` words of length at most ``degree``
  in generators with exponents in ``[-bound, bound]`` (``t_k`` exponent in ``[-bound, -1]``).
  """
  rng = random.Random(seed)
  configs: dict[tuple[str, int], AlgebraConfig] = {}
  entries: list[CorpusEntry] = []
  while len(entries) < size:
    alg = rng.choice(list(algebras))
    k = rng.choice(list(ks))
    config = configs.get((alg, k))
    if config is None:
      config = configs[(alg, k)] = corpus_config(alg, k)
    algebra = minus_algebra(config)
    words: dict[Word, Fraction] = {}
    for _ in range(rng.randint(1, max_monomials)):
      word = []
      for _ in range(rng.randint(1, degree)):
        power = [rng.randint(-bound, bound) for _ in range(k - 1)] + [rng.randint(-bound, -1)]
        word.append(LoopGenerator(rng.randrange(config.root_system.dim), tuple(power)))
      coefficient = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
      words[tuple(word)] = words.get(tuple(word), Fraction(0)) + coefficient
    z = algebra.rewrite(words)
    if z.is_zero or z.is_constant:
      continue
    entries.append(CorpusEntry(alg=alg, k=k, z=pbw_to_json(z), label=f"z{len(entries):04d}"))
  return entries


def corpus_to_json(entries: Sequence[CorpusEntry], seed: int | None = None) -> dict[str, Any]:
  return {"seed": seed, "entries": [entry.to_json() for entry in entries]}


def corpus_from_json(value: Any) -> list[CorpusEntry]:
  """Parse a committed corpus; elements themselves are parsed lazily by ``load_entry``."""
  items = value.get("entries") if isinstance(value, dict) else value
  if not isinstance(items, list):
    raise CertificateError("Corpus must be a list of entries or an object with 'entries'")
  entries = []
  for i, item in enumerate(items):
    if not isinstance(item, dict) or not {"alg", "k", "z"} <= item.keys():
      raise CertificateError(f"entries[{i}]: expected an object with 'alg', 'k' and 'z'")
    if not isinstance(item["k"], int) or isinstance(item["k"], bool):
      raise CertificateError(f"entries[{i}].k: expected an integer")
    entries.append(
      CorpusEntry(
        alg=str(item["alg"]), k=item["k"], z=item["z"], label=str(item.get("label", f"z{i:04d}"))
      )
    )
  return entries


@dataclass(frozen=True)
class CorollaryResult:
  """``(witness ⊗ t_{k-1}^r) · v`` for one shift."""

  r: int
  terms: int
  matches_reduction: bool

  @property
  def passed(self) -> bool:
    return self.terms > 0 and self.matches_reduction


@dataclass(frozen=True)
class CorollaryReport:
  base_key: "Key"
  certificate: WitnessCertificate
  r_min: int
  results: list[CorollaryResult]

  @property
  def passed(self) -> bool:
    return all(result.passed for result in self.results)


def corollary_check(
  module: "InducedModule",
  v: "ModuleVector",
  r_values: Iterable[int] | None = None,
  window: int = 5,
) -> CorollaryReport:
  """Check ``(x ⊗ t_{k-1}^r) · v ≠ 0`` for ``v = Σ z_i ⊗ ω_i`` in an induced module.

  ``x`` is the witness of the non-constant ``z_i`` of largest degree. Once ``r`` exceeds
  the depth of every ``ω_i``, ``x ⊗ t_{k-1}^r`` kills the base and the action reduces to
  ``Σ [x ⊗ t_{k-1}^r, z_i] ⊗ ω_i``; both sides are computed and compared. Without
  ``r_values`` the shifts run from that threshold to ``window`` beyond it.
  """
  if v.module is not module:
    raise CertificateError(f"v belongs to {v.module.name}, not {module.name}")
  parts: dict[Key, PBWElement] = module.decompose(v.terms)
  varying = [(key, z) for key, z in parts.items() if not z.is_constant]
  if not varying:
    raise CertificateError("Every PBW part of v is constant; v lies in the base module")
  base_key, z = sorted(varying, key=lambda item: (-item[1].degree, repr(item[0])))[0]
  cert = analyze(z)
  r_min = max(cert.p0, 1 + max(module.base_depth(((), key)) for key in parts))
  config = module.config
  if r_values is None:
    r_values = range(r_min, r_min + window + 1)
  results = []
  for r in r_values:
    if r < r_min:
      raise CertificateError(f"r = {r} is below the threshold {r_min}")
    a = cert.witness_element(config, r)
    image = module.act(a, v)
    reduced: dict[Key, Fraction] = {}
    for key, part in parts.items():
      for word, value in commutator(a, part).terms.items():
        reduced[(word, key)] = reduced.get((word, key), Fraction(0)) + value
    expected = {key: value for key, value in reduced.items() if value}
    results.append(
      CorollaryResult(r=r, terms=len(image.terms), matches_reduction=image.terms == expected)
    )
  for result in results:
    if not result.terms:
      raise CertificateFailure(f"(witness ⊗ t^{result.r}) · v vanished")
  return CorollaryReport(base_key=base_key, certificate=cert, r_min=r_min, results=results)

"""Run orchestration: every subcommand becomes a deterministic RunReport."""

import hashlib
import itertools
import json
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from rich.console import Console

from multiloop import __version__
from multiloop.algebra.codec import element_from_json, element_to_json, format_fraction
from multiloop.algebra.loop_algebra import AlgebraConfig, anti_involution, bracket
from multiloop.algebra.root_system import (
  build_root_system,
  check_structure,
  parse_algebra,
  root_system_to_json,
)
from multiloop.commutator import (
  CertificateFailure,
  CorpusEntry,
  WindowResult,
  analyze,
  certificate_to_json,
  load_entry,
  verify,
)
from multiloop.config import Settings, load_config
from multiloop.errors import DataError
from multiloop.grothendieck import (
  GrothendieckError,
  character_of,
  identity_pmatrix,
  is_restricted,
  load_pmatrix,
  p_adic_expansion,
  stabilize,
  theta_bound,
  transition_check,
  weyl_character,
)
from multiloop.models import CaseResult, RunReport
from multiloop.modules import (
  DirectSumModule,
  ModuleDescription,
  ShiftedModule,
  induced_loop_module,
  loop_module,
  module_to_json,
  weyl_module,
)
from multiloop.modules.analysis import (
  ClosureReport,
  action_relation_check,
  cogeneration_check,
  commutant_dimension,
  contravariance_check,
  distinguishability_check,
  level_check,
  radical_closure_check,
)
from multiloop.modules.base import GradedModule, ModuleError
from multiloop.modules.quotient import QuotientModule
from multiloop.sugawara import (
  SugawaraContext,
  SugawaraGrid,
  apply_L0,
  casimir_eigenvalue,
  highest_vector,
  vector_digest,
  verify_grid,
)

_console = Console(stderr=True)


def config_hash(settings: Settings, inputs: dict[str, Any]) -> str:
  """sha256 of the canonical JSON of the effective settings and the inputs."""
  payload = json.dumps(
    {"settings": settings.hashable(), "inputs": inputs},
    sort_keys=True,
    separators=(",", ":"),
    ensure_ascii=False,
  )
  return hashlib.sha256(payload.encode()).hexdigest()


def _window_json(result: WindowResult) -> dict[str, Any]:
  return {
    "r": result.r,
    "coefficient": format_fraction(result.coefficient),
    "expected": format_fraction(result.expected),
    "degree": result.degree,
    "graded_match": result.graded_match,
    "terms": result.terms,
  }


def check_entry(entry: CorpusEntry, window: int) -> CaseResult:
  """Certificate plus window verification for one corpus element."""
  z = load_entry(entry)
  cert = analyze(z)
  details: dict[str, Any] = {
    "alg": entry.alg,
    "k": entry.k,
    "certificate": certificate_to_json(cert, z.algebra.config),
  }
  try:
    results = verify(z, cert, range(cert.p0, cert.p0 + window + 1))
  except CertificateFailure as e:
    details["error"] = str(e)
    return CaseResult(entry.label or "z", False, details)
  details["results"] = [_window_json(r) for r in results]
  return CaseResult(entry.label or "z", all(r.passed for r in results), details)


def _closure_case(name: str, report: ClosureReport) -> CaseResult:
  return CaseResult(
    name,
    report.passed,
    {"checked": report.checked, "skipped": report.skipped, "failures": report.failures[:10]},
  )


class Runner:
  """Runs subcommands with one set of settings."""

  def __init__(self, settings: Settings | None = None):
    self.settings = settings or Settings()

  def _report(
    self,
    command: str,
    inputs: dict[str, Any],
    cases: Sequence[CaseResult],
    summary: str,
    data: dict[str, Any] | None = None,
  ) -> RunReport:
    return RunReport(
      command=command,
      version=__version__,
      config_hash=config_hash(self.settings, inputs),
      cases=list(cases),
      summary=summary,
      data={"inputs": inputs, **(data or {})},
    )

  def description(self, alg: str, k: int, weight: Sequence[int]) -> ModuleDescription:
    return ModuleDescription(
      alg=alg,
      k=k,
      weight=tuple(weight),
      p=self.settings.p,
      depth=self.settings.depth,
      lateral=self.settings.lateral,
    )

  def root_system(self, alg: str) -> RunReport:
    series, rank = parse_algebra(alg)
    data = build_root_system(series, rank)
    failures = check_structure(data)
    cases = [CaseResult("structure", not failures, {"failures": failures[:10]})]
    summary = f"{data.name}: dim {data.dim}, h∨ = {data.dual_coxeter}"
    inputs = {"alg": data.name}
    return self._report("root-system", inputs, cases, summary, root_system_to_json(data))

  def bracket(self, alg: str, k: int, left: Any, right: Any) -> RunReport:
    """``[a, b]`` with the antisymmetry and anti-involution checks on the same pair."""
    series, rank = parse_algebra(alg)
    config = AlgebraConfig(build_root_system(series, rank), k, self.settings.p)
    a = element_from_json(config, left, "a")
    b = element_from_json(config, right, "b")
    result = bracket(a, b)
    swapped = bracket(b, a)
    reversed_sigma = bracket(anti_involution(b), anti_involution(a))
    cases = [
      CaseResult("antisymmetry", result == -swapped),
      CaseResult("anti-involution", anti_involution(result) == reversed_sigma),
    ]
    inputs = {"alg": config.root_system.name, "k": k, "a": left, "b": right}
    return self._report(
      "bracket",
      inputs,
      cases,
      f"[a, b] has {len(result.terms)} term(s)",
      {"result": element_to_json(result)},
    )

  def check_commutator(self, entries: Sequence[CorpusEntry]) -> RunReport:
    """Analyze and verify every element; ``jobs > 1`` spreads elements over processes."""
    window = self.settings.window
    with _console.status(f"Verifying {len(entries)} element(s)..."):
      if self.settings.jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=self.settings.jobs) as pool:
          cases = list(pool.map(check_entry, entries, itertools.repeat(window)))
      else:
        cases = [check_entry(entry, window) for entry in entries]
    passed = sum(case.passed for case in cases)
    inputs = {"entries": [entry.to_json() for entry in entries]}
    return self._report(
      "check-commutator", inputs, cases, f"{passed}/{len(cases)} certificate(s) verified"
    )

  def _build(self, description: ModuleDescription) -> QuotientModule:
    label = f"{description.alg} k={description.k} λ={description.weight}"
    with _console.status(f"Building {label}..."):
      return description.build()

  def build_module(self, description: ModuleDescription) -> RunReport:
    module = self._build(description)
    cases = [
      _closure_case("level", level_check(module)),
      _closure_case("action-relations", action_relation_check(module, self.settings.seed)),
    ]
    if description.k >= 1:
      cogeneration = cogeneration_check(module)
      cases.append(
        CaseResult(
          "cogeneration",
          all(block.passed for block in cogeneration),
          {
            "blocks": len(cogeneration),
            "failed": [repr(b.block) for b in cogeneration if not b.passed],
          },
        )
      )
    cases.append(_closure_case("contravariance", contravariance_check(module.induced)))
    cases.append(_closure_case("radical-closure", radical_closure_check(module)))
    data = module_to_json(module, description)
    return self._report(
      "build-module",
      description.to_json(),
      cases,
      f"{module.name}: {data['dimension']} in-box basis vector(s)",
      data,
    )

  def commutant(self, description: ModuleDescription, double: bool = False) -> RunReport:
    """Commutant dimension: 1 for an irreducible quotient, 4 for ``V ⊕ V``."""
    module: GradedModule = self._build(description)
    expected = 1
    if double:
      module = DirectSumModule(module, module)
      expected = 4
    with _console.status("Solving the commutant system..."):
      dimension = commutant_dimension(module)
    inputs = {**description.to_json(), "double": double}
    details = {"dimension": dimension, "expected": expected}
    case = CaseResult("commutant", dimension == expected, details)
    summary = f"{module.name}: commutant dimension {dimension}"
    return self._report("commutant", inputs, [case], summary)

  def distinguish(
    self,
    description: ModuleDescription,
    targets: Sequence[Sequence[int]],
    shifts: Sequence[int],
  ) -> RunReport:
    """Compare a proper-submodule vector of ``Ind^k(Ê^{k-1}_λ)`` with shifted ``Ê^k_μ`` tops."""
    if description.k < 2:
      raise ModuleError("distinguish needs k >= 2")
    config = description.config()
    box = description.box
    with _console.status("Building the induced module and the targets..."):
      module = induced_loop_module(config, description.weight, box)
      bases = [loop_module(config, tuple(mu), box) for mu in targets]
    prefix = (0,) * (config.k - 2)
    shifted = [
      ShiftedModule(base, prefix + (m, n))
      for base in bases
      for m, n in itertools.product(shifts, repeat=2)
    ]
    with _console.status(f"Checking {len(shifted)} target(s)..."):
      report = distinguishability_check(module, shifted, window=self.settings.window)
    cases = []
    for i, candidate in enumerate(report.candidates):
      corollary = candidate.corollary
      cases.append(
        CaseResult(
          f"candidate {i}",
          candidate.passed,
          {
            "source": candidate.source.value,
            "in_radical": candidate.in_radical,
            "depth": candidate.depth,
            "norm": candidate.norm,
            "r_min": corollary.r_min,
            "certificate": certificate_to_json(corollary.certificate, config),
            "results": [
              {"r": r.r, "terms": r.terms, "matches_reduction": r.matches_reduction}
              for r in corollary.results
            ],
          },
        )
      )
    for target in report.targets:
      cases.append(
        CaseResult(
          target.name,
          target.passed,
          {
            "shift": list(target.shift),
            "top_vectors": target.vectors,
            "r_values": list(target.r_values),
            "survivors": target.survivors,
          },
        )
      )
    inputs = {
      **description.to_json(),
      "targets": [list(mu) for mu in targets],
      "shifts": list(shifts),
    }
    return self._report(
      "distinguish", inputs, cases, report.verdict, {"verdict": report.verdict}
    )

  def sugawara_verify(self, description: ModuleDescription, grid: Any | None = None) -> RunReport:
    """``[x(n), L₀]`` against its closed forms on ``Ind^k(Ê^{k-1}_λ)``."""
    config = description.config()
    parsed = SugawaraGrid.default(config) if grid is None else SugawaraGrid.from_json(config, grid)
    with _console.status("Building the induced module..."):
      module = induced_loop_module(config, description.weight, description.box)
    with _console.status("Checking the Sugawara grid..."):
      vector_cases, commutator_cases = verify_grid(module, parsed)
      top = highest_vector(module, description.weight)
      eigenvalue = casimir_eigenvalue(config.root_system, description.weight)
      top_value = apply_L0(SugawaraContext(module), top)
    cases = [
      CaseResult(
        "casimir",
        top_value == eigenvalue * top,
        {"expected": format_fraction(eigenvalue), "digest": vector_digest(top_value)},
      )
    ]
    for case in vector_cases:
      cases.append(
        CaseResult(
          f"L0 {case.vector!r}",
          case.passed,
          {
            "depth": case.depth,
            "digest": vector_digest(case.value),
            "preserves_grading": case.preserves_grading,
            "stabilized": {str(m): ok for m, ok in case.stabilized.items()},
            "offset_matches": {str(m): ok for m, ok in case.offset_matches.items()},
          },
        )
      )
    for case in commutator_cases:
      cases.append(
        CaseResult(
          f"[{case.x}{list(case.n)}, L0] {case.vector!r}",
          case.passed,
          {
            "branch": case.branch,
            "lhs": vector_digest(case.lhs),
            "rhs": vector_digest(case.rhs),
            "central_cancellation": case.central_cancellation,
          },
        )
      )
    passed = sum(case.passed for case in cases)
    inputs = {**description.to_json(), "grid": grid}
    return self._report("sugawara-verify", inputs, cases, f"{passed}/{len(cases)} case(s) hold")

  def ek(self, alg: str, weight: Sequence[int], pmatrix_path: Path | None = None) -> RunReport:
    """``E^k_λ`` for ``k = 0, 1, …`` until it stabilizes or ``kmax`` is reached."""
    series, rank = parse_algebra(alg)
    data = build_root_system(series, rank)
    p = self.settings.p
    lam = tuple(weight)
    if pmatrix_path is None:
      pmatrix = identity_pmatrix(data, p, theta_bound(data, lam))
    else:
      pmatrix = load_pmatrix(pmatrix_path)
      if pmatrix.root_system.name != data.name or pmatrix.p != p:
        raise GrothendieckError(
          f"P matrix is for {pmatrix.root_system.name}, p = {pmatrix.p}; "
          f"expected {data.name}, p = {p}"
        )
    digits = p_adic_expansion(lam, p)
    total = tuple(sum(p**r * d[i] for r, d in enumerate(digits)) for i in range(data.rank))
    cases = [
      CaseResult(
        "expansion",
        total == lam and all(is_restricted(d, p) for d in digits),
        {"digits": [list(d) for d in digits]},
      )
    ]
    with _console.status("Running the E^k recursion..."):
      result = stabilize(lam, pmatrix, self.settings.kmax)
      for k in range(1, len(result.history)):
        [check] = transition_check([lam], k, pmatrix)
        cases.append(
          CaseResult(
            f"E^{k} column",
            check.passed,
            {"diagonal": check.diagonal, "off_pattern": [list(mu) for mu in check.off_pattern]},
          )
        )
      character = weyl_character(data, lam)
      module_weights = dict(weyl_module(AlgebraConfig(data, 0, p), lam).weights())
    cases.append(
      CaseResult(
        "weyl-character",
        module_weights == character.terms,
        {"dimension": character.dimension},
      )
    )
    cases.append(CaseResult("stabilization", result.k_stable is not None, {"k": result.k_stable}))
    final = character_of(data, result.value)
    inputs = {"alg": data.name, "lambda": list(lam), "p": p, "pmatrix": pmatrix.to_json()}
    return self._report(
      "ek",
      inputs,
      cases,
      f"E^k_{list(lam)} stabilizes at k = {result.k_stable}"
      if result.k_stable is not None
      else f"E^k_{list(lam)} did not stabilize within k <= {self.settings.kmax}",
      {
        "history": [vector.to_json() for vector in result.history],
        "k_stable": result.k_stable,
        "character": final.to_json(),
        "character_dimension": final.dimension,
      },
    )


def load_json(path: Path) -> Any:
  """Read a JSON input file; decoding errors become data errors."""
  try:
    return json.loads(path.read_text())
  except json.JSONDecodeError as e:
    raise DataError(f"{path}: invalid JSON: {e}") from None


def make_runner(config_path: Path | None = None, **overrides: Any) -> Runner:
  """Settings from the config file with CLI overrides applied, wrapped in a Runner."""
  settings = load_config(config_path).override(**overrides)
  return Runner(settings)

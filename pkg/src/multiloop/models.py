"""Core enums and report models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence


class Series(Enum):
  """Dynkin series of a simple Lie algebra."""

  A = "A"
  B = "B"
  C = "C"
  D = "D"
  E = "E"
  F = "F"
  G = "G"


class ElementKind(Enum):
  """Kind of a Chevalley basis element."""

  CARTAN = "cartan"
  ROOT = "root"


class Subalgebra(Enum):
  """Distinguished subalgebras of the extended multi-loop algebra."""

  PLUS = "plus"
  MINUS = "minus"
  TILDE = "tilde"
  HAT_K = "hat_k"


class WitnessCase(Enum):
  """Branch of the commutator non-vanishing argument."""

  CARTAN_FREE = "I"
  CARTAN_ONLY = "II"


class RewriteStrategy(Enum):
  """Which inversion the PBW rewriter resolves first."""

  RIGHTMOST = "rightmost"
  LEFTMOST = "leftmost"


class OutputFormat(Enum):
  """Report output formats."""

  JSON = "json"
  TERMINAL = "terminal"
  MARKDOWN = "markdown"


@dataclass(frozen=True)
class CaseResult:
  """Verdict for a single checked case."""

  name: str
  passed: bool
  details: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RunReport:
  """Result of one CLI command."""

  command: str
  version: str
  config_hash: str
  cases: Sequence[CaseResult]
  summary: str = ""
  data: dict[str, Any] = field(default_factory=dict)

  @property
  def passed(self) -> bool:
    """True when every case passed."""
    return all(case.passed for case in self.cases)

  @property
  def failures(self) -> list[CaseResult]:
    return [case for case in self.cases if not case.passed]

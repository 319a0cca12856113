"""Simple Lie algebras and their multi-loop extensions."""

from multiloop.algebra.codec import ElementFormatError, element_from_json, element_to_json
from multiloop.algebra.loop_algebra import (
  AlgebraConfig,
  CentralGenerator,
  DerivationGenerator,
  Generator,
  LoopAlgebraError,
  LoopElement,
  LoopGenerator,
  anti_involution,
  bracket,
  subalgebra_member,
)
from multiloop.algebra.root_system import (
  ChevalleyElement,
  RootSystemData,
  build_root_system,
  parse_algebra,
)
from multiloop.algebra.series import RootSystemError

__all__ = [
  "AlgebraConfig",
  "CentralGenerator",
  "ChevalleyElement",
  "DerivationGenerator",
  "ElementFormatError",
  "Generator",
  "LoopAlgebraError",
  "LoopElement",
  "LoopGenerator",
  "RootSystemData",
  "RootSystemError",
  "anti_involution",
  "bracket",
  "build_root_system",
  "element_from_json",
  "element_to_json",
  "parse_algebra",
  "subalgebra_member",
]

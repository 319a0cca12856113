"""Truncated graded modules: Weyl modules, induced modules and their irreducible quotients."""

from multiloop.modules.base import (
  BoxOverflowError,
  GradedModule,
  HighestWeightLine,
  ModuleError,
  ModuleVector,
  TruncationBox,
)
from multiloop.modules.builder import (
  ModuleDescription,
  induce,
  induced_loop_module,
  irreducible_quotient,
  loop_module,
  module_to_json,
)
from multiloop.modules.derived import DirectSumModule, ShiftedModule
from multiloop.modules.induced import InducedModule, verma_module
from multiloop.modules.quotient import QuotientBlock, QuotientModule
from multiloop.modules.weyl import WeylModule, weyl_module

__all__ = [
  "BoxOverflowError",
  "DirectSumModule",
  "GradedModule",
  "HighestWeightLine",
  "InducedModule",
  "ModuleDescription",
  "ModuleError",
  "ModuleVector",
  "QuotientBlock",
  "QuotientModule",
  "ShiftedModule",
  "TruncationBox",
  "WeylModule",
  "induce",
  "induced_loop_module",
  "irreducible_quotient",
  "loop_module",
  "module_to_json",
  "verma_module",
  "weyl_module",
]

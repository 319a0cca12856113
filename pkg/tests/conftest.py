"""Pytest fixtures."""

import pytest
from multiloop.algebra.loop_algebra import AlgebraConfig
from multiloop.algebra.root_system import RootSystemData, build_root_system
from multiloop.models import CaseResult, RunReport
from multiloop.modules import ModuleDescription


@pytest.fixture
def a1() -> RootSystemData:
  return build_root_system("A", 1)


@pytest.fixture
def a2() -> RootSystemData:
  return build_root_system("A", 2)


@pytest.fixture
def a1_k2(a1: RootSystemData) -> AlgebraConfig:
  return AlgebraConfig(a1, 2, 2)


@pytest.fixture
def a1_k1(a1: RootSystemData) -> AlgebraConfig:
  return AlgebraConfig(a1, 1, 2)


@pytest.fixture
def small_description() -> ModuleDescription:
  return ModuleDescription(alg="A1", k=1, weight=(1,), p=2, depth=1, lateral=1)


@pytest.fixture
def sample_report() -> RunReport:
  return RunReport(
    command="root-system",
    version="0.1.0",
    config_hash="0" * 64,
    cases=[
      CaseResult("structure", True, {"failures": []}),
      CaseResult("casimir", False, {"expected": "3/4", "digest": "abc"}),
    ],
    summary="A1: dim 3, h∨ = 2",
    data={"inputs": {"alg": "A1"}},
  )

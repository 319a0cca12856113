"""Large seeded suites; run with ``pytest -m slow``."""

import itertools
import random

import pytest
from multiloop.algebra.loop_algebra import AlgebraConfig, LoopGenerator, bracket, random_element
from multiloop.algebra.root_system import build_root_system
from multiloop.commutator import random_corpus
from multiloop.config import Settings
from multiloop.enveloping import minus_algebra, top_component
from multiloop.models import RewriteStrategy
from multiloop.modules import ModuleDescription
from multiloop.modules.analysis import (
  cogeneration_check,
  commutant_dimension,
  contravariance_check,
  level_check,
  proper_submodule_vectors,
  radical_closure_check,
)
from multiloop.modules.builder import induced_loop_module
from multiloop.runner import Runner, check_entry
from multiloop.sugawara import SugawaraContext, SugawaraGrid, check_commutator

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("alg, k", list(itertools.product(("A1", "A2"), (1, 2, 3))))
def test_bracket_identities(alg: str, k: int) -> None:
  config = AlgebraConfig(build_root_system(alg[0], int(alg[1:])), k, 2)
  rng = random.Random(f"{alg}-{k}")
  for _ in range(170):
    a, b, c = (random_element(config, rng) for _ in range(3))
    assert bracket(a, b) == -bracket(b, a)
    total = bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)
    assert total.is_zero


def test_normal_ordering_confluence() -> None:
  config = AlgebraConfig(build_root_system("A", 1), 2, 2)
  minus = minus_algebra(config)
  leftmost = minus.with_strategy(RewriteStrategy.LEFTMOST)
  rng = random.Random(500)
  for _ in range(500):
    word = [
      LoopGenerator(rng.randrange(3), (rng.randint(-2, 2), rng.randint(-2, -1)))
      for _ in range(rng.randint(2, 4))
    ]
    ordered = minus.normal_order(word)
    assert ordered == leftmost.normal_order(word)
    half = len(word) // 2
    a, b = minus.normal_order(word[:half]), minus.normal_order(word[half:])
    assert a * b == ordered
    assert top_component(ordered) == top_component(top_component(a) * top_component(b))


def test_commutator_corpus() -> None:
  entries = random_corpus(Settings().seed, 200)
  failures = [
    (entry.label, case.details)
    for entry in entries
    if not (case := check_entry(entry, window=5)).passed
  ]
  assert not failures


@pytest.mark.parametrize("weight, p", list(itertools.product(((0,), (1,), (2,)), (2, 3))))
def test_module_suite(weight: tuple[int, ...], p: int) -> None:
  module = ModuleDescription(alg="A1", k=2, weight=weight, p=p, depth=3, lateral=3).build()
  assert level_check(module).passed
  assert contravariance_check(module.induced).passed
  assert radical_closure_check(module).passed
  assert all(block.passed for block in cogeneration_check(module))
  assert commutant_dimension(module) == 1


def test_distinguish_vacuum() -> None:
  runner = Runner(Settings(depth=2, lateral=2))
  description = runner.description("A1", 2, (0,))
  report = runner.distinguish(description, [(0,), (1,), (2,)], range(-2, 3))
  candidates = [case for case in report.cases if case.name.startswith("candidate")]
  assert candidates
  for case in candidates:
    assert case.details["source"] == "radical"
    assert case.details["in_radical"] is True
    assert case.details["depth"] >= 1
  assert report.passed
  assert report.data["verdict"] == "not isomorphic"

  module = induced_loop_module(description.config(), (0,), description.box)
  for v in proper_submodule_vectors(module):
    assert any(not z.is_constant for z in module.decompose(v.terms).values())


def test_sugawara_theorem_grid() -> None:
  config = AlgebraConfig(build_root_system("A", 1), 2, 2)
  module = induced_loop_module(config, (1,), ModuleDescription("A1", 2, (1,)).box)
  ctx = SugawaraContext(module)
  grid = SugawaraGrid(
    elements=(0, 1, 2),
    exponents=((1, -1), (-1, 1), (1, 0), (-1, -1), (2, -2)),
    max_depth=2,
    max_vectors=2,
  )
  cases = [
    check_commutator(ctx, x, n, v)
    for x in grid.elements
    for n in grid.exponents
    for v in grid.vectors(module)
  ]
  assert len(cases) >= 20
  assert all(case.passed for case in cases)

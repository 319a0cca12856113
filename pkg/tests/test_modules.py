"""Tests for truncated Weyl, induced and quotient modules."""

from fractions import Fraction

import pytest
from multiloop.algebra.loop_algebra import AlgebraConfig, LoopGenerator
from multiloop.algebra.root_system import RootSystemData
from multiloop.modules import (
  DirectSumModule,
  InducedModule,
  ModuleDescription,
  ModuleError,
  QuotientModule,
  ShiftedModule,
  TruncationBox,
  induced_loop_module,
  loop_module,
  module_to_json,
  verma_module,
  weyl_module,
)
from multiloop.modules.analysis import (
  CandidateSource,
  action_relation_check,
  cogeneration_check,
  commutant_dimension,
  contravariance_check,
  default_candidate,
  distinguishability_check,
  in_radical,
  level_check,
  proper_submodule_vectors,
  radical_closure_check,
  top_degree_part,
  v_norm_k,
)
from multiloop.modules.base import ModuleVector
from multiloop.sugawara import highest_vector

H1, E, F = 0, 1, 2


@pytest.fixture(scope="module")
def small_module() -> QuotientModule:
  return ModuleDescription(alg="A1", k=1, weight=(1,), depth=1, lateral=1).build()


class TestWeylModule:
  def test_sl2_adjoint(self, a1: RootSystemData) -> None:
    module = weyl_module(AlgebraConfig(a1, 0), (2,))
    assert module.dimension() == 3
    assert module.weights() == [((2,), 1), ((0,), 1), ((-2,), 1)]

  def test_a2_adjoint(self, a2: RootSystemData) -> None:
    module = weyl_module(AlgebraConfig(a2, 0), (1, 1))
    assert module.dimension() == 8
    assert dict(module.weights())[(0, 0)] == 2

  def test_a2_standard(self, a2: RootSystemData) -> None:
    module = weyl_module(AlgebraConfig(a2, 0), (1, 0))
    assert sorted(w for w, _ in module.weights()) == [(-1, 1), (0, -1), (1, 0)]

  def test_non_dominant_rejected(self, a1: RootSystemData) -> None:
    with pytest.raises(ModuleError, match="not dominant"):
      weyl_module(AlgebraConfig(a1, 0), (-1,))

  def test_wrong_length_rejected(self, a1: RootSystemData) -> None:
    with pytest.raises(ModuleError, match="expected 1"):
      weyl_module(AlgebraConfig(a1, 0), (1, 0))

  def test_sl2_action(self, a1: RootSystemData) -> None:
    module = weyl_module(AlgebraConfig(a1, 0), (1,))
    top = module.basis_vector(module.highest_key)
    lowered = module.act(LoopGenerator(F, ()), top)
    assert not lowered.is_zero
    assert module.act(LoopGenerator(F, ()), lowered).is_zero
    assert module.act(LoopGenerator(E, ()), lowered) == top


class TestVermaModule:
  def test_gram_blocks(self, a1: RootSystemData) -> None:
    verma = verma_module(AlgebraConfig(a1, 0), (1,), depth=2)
    assert verma.gram(((), (-1,))) == [{0: Fraction(1)}]
    # f²·v spans the radical at λ = 1
    assert verma.gram(((), (-3,))) == [{}]

  def test_blocks_by_depth(self, a1: RootSystemData) -> None:
    verma = verma_module(AlgebraConfig(a1, 0), (1,), depth=2)
    assert verma.in_box_blocks() == (((), (1,)), ((), (-1,)), ((), (-3,)))


class TestLoopModule:
  def test_block_table(self, small_module: QuotientModule) -> None:
    description = ModuleDescription(alg="A1", k=1, weight=(1,), depth=1, lateral=1)
    data = module_to_json(small_module, description)
    top = [b for b in data["blocks"] if b["depth"] == 0]
    assert sum(b["quotient_dimension"] for b in top) == 2
    assert all(b["radical_dimension"] == 0 for b in top)
    assert data["level_scalars"] == ["-4"]

  def test_level(self, small_module: QuotientModule) -> None:
    report = level_check(small_module)
    assert report.checked > 0
    assert report.passed, report.failures

  def test_level_two_loops(self) -> None:
    module = ModuleDescription(alg="A1", k=2, weight=(0,), depth=1, lateral=1).build()
    report = level_check(module)
    assert report.checked >= 2
    assert report.passed, report.failures

  def test_action_relations(self, small_module: QuotientModule) -> None:
    report = action_relation_check(small_module, seed=1, samples=10)
    assert report.passed, report.failures

  def test_cogeneration(self, small_module: QuotientModule) -> None:
    ranks = cogeneration_check(small_module)
    assert ranks
    assert all(block.passed for block in ranks)

  def test_contravariance(self, small_module: QuotientModule) -> None:
    report = contravariance_check(small_module.induced, max_depth=1)
    assert report.checked > 0
    assert report.passed, report.failures

  def test_radical_closure(self, small_module: QuotientModule) -> None:
    assert radical_closure_check(small_module).passed

  def test_commutant_is_scalar(self, small_module: QuotientModule) -> None:
    assert commutant_dimension(small_module) == 1

  def test_commutant_of_double(self, small_module: QuotientModule) -> None:
    assert commutant_dimension(DirectSumModule(small_module, small_module)) == 4


class TestDerivedModules:
  def test_shift_moves_grading(self, small_module: QuotientModule) -> None:
    shifted = ShiftedModule(small_module, (3,))
    key = next(iter(small_module.in_box_keys()))
    degrees, weight = small_module.block_of(key)
    assert shifted.block_of(key) == ((degrees[0] + 3,), weight)
    assert shifted.block_basis(shifted.block_of(key)) == small_module.block_basis((degrees, weight))

  def test_shift_length_checked(self, small_module: QuotientModule) -> None:
    with pytest.raises(ModuleError):
      ShiftedModule(small_module, (1, 2))

  def test_direct_sum_needs_same_algebra(
    self, small_module: QuotientModule, a1: RootSystemData
  ) -> None:
    other = weyl_module(AlgebraConfig(a1, 0), (1,))
    with pytest.raises(ModuleError, match="same algebra"):
      DirectSumModule(small_module, other)


class TestVectors:
  def test_norm_and_top(self, small_module: QuotientModule) -> None:
    keys = list(small_module.in_box_keys())
    shallow = next(key for key in keys if small_module.depth(key) == 0)
    deep = next(key for key in keys if small_module.depth(key) == 1)
    v = small_module.vector({shallow: 1, deep: 2})
    assert v_norm_k(v) == 1
    assert top_degree_part(v) == small_module.basis_vector(shallow)

  def test_zero_vector(self, small_module: QuotientModule) -> None:
    with pytest.raises(ModuleError):
      v_norm_k(small_module.vector({}))

  def test_zero_terms_dropped_from_a_copy(self, small_module: QuotientModule) -> None:
    keys = list(small_module.in_box_keys())
    terms = {keys[0]: Fraction(1), keys[1]: Fraction(0)}
    v = ModuleVector(small_module, terms)
    assert v.terms == {keys[0]: Fraction(1)}
    assert len(terms) == 2


class TestModuleDescription:
  def test_json(self) -> None:
    value = {"alg": "A1", "k": 2, "lambda": 3}
    description = ModuleDescription.from_json(value)
    assert description.weight == (3,)
    assert description.to_json()["depth"] == 3

  def test_missing_key(self) -> None:
    with pytest.raises(ModuleError, match="missing key"):
      ModuleDescription.from_json({"alg": "A1"})

  def test_box_bounds(self) -> None:
    with pytest.raises(ModuleError):
      TruncationBox(depth=-1)


@pytest.fixture(scope="module")
def vacuum_module() -> InducedModule:
  config = ModuleDescription(alg="A1", k=2, weight=(0,)).config()
  return induced_loop_module(config, (0,), TruncationBox(depth=1, lateral=2))


def _singlet(module: InducedModule) -> ModuleVector:
  """``c_1 h(2,-1)h(-1) + e(2,-1)f(-1) + f(2,-1)e(-1)`` on the top vector; ``c_1 = -4``."""
  top = highest_vector(module, (0,))
  pairs = [(H1, H1, -4), (E, F, 1), (F, E, 1)]
  total = module.vector({})
  for x, y, c in pairs:
    word = [LoopGenerator(x, (2, -1)), LoopGenerator(y, (-1, 0))]
    total = total + c * module.act_word(word, top)
  return total


class TestDistinguish:
  def test_base_depth_capped(self, vacuum_module: InducedModule) -> None:
    cap = vacuum_module.base.box.depth
    for block in vacuum_module.in_box_blocks():
      assert all(vacuum_module.base_depth(k) <= cap for k in vacuum_module.block_basis(block))

  def test_singlet_in_radical(self, vacuum_module: InducedModule) -> None:
    quotient = QuotientModule(vacuum_module)
    w = _singlet(vacuum_module)
    assert len(w.terms) == 3
    assert in_radical(quotient, w)
    top = highest_vector(vacuum_module, (0,))
    shallow = vacuum_module.act_word([LoopGenerator(H1, (1, -1))], top)
    assert not in_radical(quotient, w + shallow)

  def test_radical_vectors_found(self, vacuum_module: InducedModule) -> None:
    vectors = proper_submodule_vectors(vacuum_module)
    assert vectors
    assert all(v.depth == 1 for v in vectors)
    assert any(set(v.terms) == set(_singlet(vacuum_module).terms) for v in vectors)
    for v in vectors:
      parts = vacuum_module.decompose(v.terms).values()
      assert all(not z.is_constant for z in parts)

  def test_radical_candidates_decide(self, vacuum_module: InducedModule) -> None:
    report = distinguishability_check(vacuum_module, [], window=2)
    assert report.candidates
    assert all(c.source is CandidateSource.RADICAL for c in report.candidates)
    assert all(c.in_radical for c in report.candidates)
    assert report.verdict == "not isomorphic"

  def test_given_radical_vector(self, vacuum_module: InducedModule) -> None:
    report = distinguishability_check(
      vacuum_module, [], window=2, candidates=[_singlet(vacuum_module)]
    )
    assert report.candidates[0].source is CandidateSource.GIVEN
    assert report.verdict == "not isomorphic"

  def test_given_vector_outside_radical(self, vacuum_module: InducedModule) -> None:
    candidate = default_candidate(vacuum_module)
    report = distinguishability_check(vacuum_module, [], window=2, candidates=[candidate])
    assert not report.candidates[0].in_radical
    assert not report.passed
    assert report.verdict == "inconclusive"

  def test_default_fallback_is_inconclusive(self) -> None:
    config = ModuleDescription(alg="A1", k=2, weight=(0,)).config()
    module = induced_loop_module(config, (0,), TruncationBox(depth=1, lateral=0))
    report = distinguishability_check(module, [], window=2)
    (candidate,) = report.candidates
    assert candidate.source is CandidateSource.DEFAULT
    assert not candidate.in_radical
    assert not candidate.passed
    assert report.verdict == "inconclusive"

  def test_targets_annihilated(self, vacuum_module: InducedModule) -> None:
    config = vacuum_module.config
    target = ShiftedModule(loop_module(config, (1,), TruncationBox(depth=1, lateral=2)), (0, 0))
    report = distinguishability_check(vacuum_module, [target], window=2)
    (result,) = report.targets
    assert result.vectors > 0
    assert result.passed

  def test_foreign_candidate_rejected(
    self, vacuum_module: InducedModule, small_module: QuotientModule
  ) -> None:
    foreign = small_module.basis_vector(next(iter(small_module.in_box_keys())))
    with pytest.raises(ModuleError, match="belongs to"):
      distinguishability_check(vacuum_module, [], candidates=[foreign])

  def test_needs_two_loops(self, small_module: QuotientModule) -> None:
    with pytest.raises(ModuleError, match="k >= 2"):
      distinguishability_check(small_module.induced, [])

"""Tests for commutator witness certificates."""

from fractions import Fraction

import pytest
from multiloop.algebra.loop_algebra import AlgebraConfig, LoopGenerator
from multiloop.commutator import (
  CertificateError,
  CorpusEntry,
  analyze,
  certificate_to_json,
  corollary_check,
  corpus_from_json,
  corpus_to_json,
  predicted_coefficient,
  random_corpus,
  verify,
)
from multiloop.enveloping import PBWAlgebra, minus_algebra, pbw_to_json
from multiloop.models import WitnessCase
from multiloop.modules import TruncationBox, induced_loop_module
from multiloop.modules.analysis import default_candidate
from multiloop.runner import check_entry

H1, E, F = 0, 1, 2


def _gen(element: int, *power: int) -> LoopGenerator:
  return LoopGenerator(element, tuple(power))


@pytest.fixture
def minus(a1_k2: AlgebraConfig) -> PBWAlgebra:
  return minus_algebra(a1_k2)


class TestAnalyze:
  def test_root_vector(self, minus: PBWAlgebra) -> None:
    cert = analyze(minus.generator(_gen(E, 0, -1)))
    assert cert.case == WitnessCase.CARTAN_FREE
    assert cert.witness == {H1: Fraction(2)}
    assert cert.p0 == 1
    assert predicted_coefficient(cert) == 2

  def test_negative_root_vector(self, minus: PBWAlgebra) -> None:
    cert = analyze(minus.generator(_gen(F, 0, -1)))
    assert cert.witness == {H1: Fraction(2)}
    assert predicted_coefficient(cert) == -2

  def test_cartan_only(self, minus: PBWAlgebra) -> None:
    cert = analyze(minus.generator(_gen(H1, 0, -1)))
    assert cert.case == WitnessCase.CARTAN_ONLY
    assert cert.witness == {E: Fraction(1)}
    assert predicted_coefficient(cert) == -1

  def test_top_component_drives_choice(self, minus: PBWAlgebra) -> None:
    f = _gen(F, 1, -1)
    z = minus.from_monomials({((f, 2),): 1, ((_gen(E, 0, -2), 1),): 1})
    cert = analyze(z)
    assert cert.exponents == (2,)
    assert cert.p0 == 3
    assert predicted_coefficient(cert) == -4

  def test_constant_rejected(self, minus: PBWAlgebra) -> None:
    with pytest.raises(CertificateError, match="constant"):
      analyze(minus.scalar(5))

  def test_needs_two_loops(self, a1_k1: AlgebraConfig) -> None:
    z = minus_algebra(a1_k1).generator(_gen(E, -1))
    with pytest.raises(CertificateError, match="k >= 2"):
      analyze(z)

  def test_json(self, minus: PBWAlgebra, a1_k2: AlgebraConfig) -> None:
    data = certificate_to_json(analyze(minus.generator(_gen(E, 0, -1))), a1_k2)
    assert data["case"] == "I"
    assert data["witness"] == {"h1": "2"}
    assert data["predicted_coefficient"] == "2"
    assert data["pivot"] == 1


class TestVerify:
  def test_window(self, minus: PBWAlgebra) -> None:
    z = minus.generator(_gen(E, 0, -1))
    results = verify(z, analyze(z), range(1, 4))
    assert [r.r for r in results] == [1, 2, 3]
    assert all(r.passed for r in results)
    assert all(r.coefficient == 2 for r in results)

  def test_mixed_degrees(self, minus: PBWAlgebra) -> None:
    f = _gen(F, 1, -1)
    z = minus.from_monomials({((f, 2),): 1, ((_gen(E, 0, -2), 1),): 1})
    cert = analyze(z)
    results = verify(z, cert, range(cert.p0, cert.p0 + 3))
    assert all(r.passed for r in results)
    assert results[0].degree == 2

  def test_below_threshold(self, minus: PBWAlgebra) -> None:
    f = _gen(F, 1, -1)
    z = minus.generator(f)
    with pytest.raises(CertificateError, match="below p0"):
      verify(z, analyze(z), [1])


class TestCorpus:
  def test_seeded_corpus_is_reproducible(self) -> None:
    first = [entry.to_json() for entry in random_corpus(17, 4)]
    second = [entry.to_json() for entry in random_corpus(17, 4)]
    assert first == second
    assert [entry["label"] for entry in first] == ["z0000", "z0001", "z0002", "z0003"]

  def test_seeded_corpus_verifies(self) -> None:
    entries = random_corpus(3, 3, algebras=("A1",), ks=(2,), degree=2)
    for entry in entries:
      case = check_entry(entry, window=2)
      assert case.passed, case.details

  def test_corpus_json(self, minus: PBWAlgebra) -> None:
    z = pbw_to_json(minus.generator(_gen(E, 0, -1)))
    entries = corpus_from_json(corpus_to_json([CorpusEntry("A1", 2, z, "first")], seed=1))
    assert entries == [CorpusEntry("A1", 2, z, "first")]

  def test_default_labels(self, minus: PBWAlgebra) -> None:
    z = pbw_to_json(minus.generator(_gen(E, 0, -1)))
    entries = corpus_from_json([{"alg": "A1", "k": 2, "z": z}])
    assert entries[0].label == "z0000"

  @pytest.mark.parametrize(
    "value",
    [{"entries": 3}, [{"alg": "A1", "k": 2}], [{"alg": "A1", "k": "2", "z": {}}]],
  )
  def test_malformed_corpus(self, value: object) -> None:
    with pytest.raises(CertificateError):
      corpus_from_json(value)


class TestCorollary:
  def test_induced_vector(self, a1_k2: AlgebraConfig) -> None:
    module = induced_loop_module(a1_k2, (0,), TruncationBox(depth=1, lateral=1))
    v = default_candidate(module)
    report = corollary_check(module, v, window=2)
    assert report.r_min == 1
    assert [r.r for r in report.results] == [1, 2, 3]
    assert report.passed

  def test_base_vector_rejected(self, a1_k2: AlgebraConfig) -> None:
    module = induced_loop_module(a1_k2, (0,), TruncationBox(depth=1, lateral=1))
    top = next(iter(module.keys_at_depth(0)))
    with pytest.raises(CertificateError, match="constant"):
      corollary_check(module, module.basis_vector(top))

  def test_vector_of_another_module_rejected(self, a1_k2: AlgebraConfig) -> None:
    box = TruncationBox(depth=1, lateral=1)
    module = induced_loop_module(a1_k2, (0,), box)
    other = induced_loop_module(a1_k2, (0,), box)
    with pytest.raises(CertificateError, match="belongs to"):
      corollary_check(module, default_candidate(other))

"""Tests for the multi-loop bracket and its JSON encoding."""

import random
from fractions import Fraction

import pytest
from multiloop.algebra.codec import (
  ElementFormatError,
  chevalley_from_json,
  element_from_json,
  element_to_json,
  parse_fraction,
)
from multiloop.algebra.loop_algebra import (
  AlgebraConfig,
  CentralGenerator,
  LoopAlgebraError,
  LoopElement,
  anti_involution,
  bracket,
  random_element,
  subalgebra_member,
)
from multiloop.algebra.root_system import RootSystemData
from multiloop.models import Subalgebra

H1, E, F = 0, 1, 2


def _term(gen: dict, coeff: str = "1") -> dict:
  return {"coeff": coeff, "gen": gen}


class TestBracket:
  def test_central_term(self, a1_k2: AlgebraConfig) -> None:
    a = a1_k2.loop(E, (1, 2))
    b = a1_k2.loop(F, (-1, -2))
    expected = 2 * a1_k2.loop(H1, (0, 0)) + a1_k2.central(1) + 2 * a1_k2.central(2)
    assert bracket(a, b) == expected

  def test_no_central_term_off_diagonal(self, a1_k2: AlgebraConfig) -> None:
    a = a1_k2.loop(E, (1, 2))
    b = a1_k2.loop(F, (-1, -1))
    assert bracket(a, b) == 2 * a1_k2.loop(H1, (0, 1))

  def test_cartan_pairing(self, a1_k2: AlgebraConfig) -> None:
    a = a1_k2.loop(H1, (0, 3))
    b = a1_k2.loop(H1, (0, -3))
    assert bracket(a, b) == Fraction(3, 2) * a1_k2.central(2)

  def test_derivations(self, a1_k2: AlgebraConfig) -> None:
    x = a1_k2.loop(E, (1, 2))
    assert bracket(a1_k2.derivation(2), x) == 2 * x
    assert bracket(x, a1_k2.derivation(1)) == -x
    assert bracket(a1_k2.derivation(1), a1_k2.central(2)).is_zero

  def test_antisymmetry(self, a1_k2: AlgebraConfig) -> None:
    rng = random.Random(7)
    for _ in range(20):
      a = random_element(a1_k2, rng)
      b = random_element(a1_k2, rng)
      assert bracket(a, b) == -bracket(b, a)

  def test_jacobi(self, a1_k2: AlgebraConfig) -> None:
    rng = random.Random(11)
    for _ in range(10):
      a, b, c = (random_element(a1_k2, rng) for _ in range(3))
      total = bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)
      assert total.is_zero

  def test_anti_involution_reverses_brackets(self, a1_k2: AlgebraConfig) -> None:
    rng = random.Random(3)
    for _ in range(20):
      a = random_element(a1_k2, rng)
      b = random_element(a1_k2, rng)
      assert anti_involution(bracket(a, b)) == bracket(anti_involution(b), anti_involution(a))

  def test_mismatched_algebras(self, a1: RootSystemData, a1_k2: AlgebraConfig) -> None:
    other = AlgebraConfig(a1, 1)
    with pytest.raises(LoopAlgebraError, match="Mismatched"):
      bracket(a1_k2.loop(E, (0, 0)), other.loop(F, (0,)))


class TestAlgebraConfig:
  def test_level_scalars(self, a1_k2: AlgebraConfig) -> None:
    assert a1_k2.level(1) == -4
    assert a1_k2.level(2) == -6
    assert a1_k2.level_scalars == (Fraction(-4), Fraction(-6))

  def test_invalid_parameters(self, a1: RootSystemData) -> None:
    with pytest.raises(LoopAlgebraError):
      AlgebraConfig(a1, -1)
    with pytest.raises(LoopAlgebraError):
      AlgebraConfig(a1, 1, p=1)

  def test_exponent_length_checked(self, a1_k2: AlgebraConfig) -> None:
    with pytest.raises(LoopAlgebraError, match="expected 2"):
      a1_k2.loop(E, (1,))

  def test_central_index_checked(self, a1_k2: AlgebraConfig) -> None:
    with pytest.raises(LoopAlgebraError):
      a1_k2.central(3)

  def test_subalgebras(self, a1_k2: AlgebraConfig) -> None:
    lowering = a1_k2.loop(E, (5, -1))
    assert subalgebra_member(lowering, Subalgebra.MINUS)
    assert not subalgebra_member(lowering, Subalgebra.PLUS)
    assert subalgebra_member(a1_k2.central(1), Subalgebra.PLUS)
    assert not subalgebra_member(a1_k2.derivation(1), Subalgebra.TILDE)
    assert subalgebra_member(a1_k2.derivation(2), Subalgebra.HAT_K)

  def test_labels(self, a1_k2: AlgebraConfig) -> None:
    assert str(a1_k2.loop(F, (0, -1))) == "(1)·e(-1)⊗t^(0,-1)"
    assert str(a1_k2.zero()) == "0"


class TestCodec:
  def test_parse_element(self, a1_k2: AlgebraConfig) -> None:
    value = {
      "alg": "A1",
      "k": 2,
      "terms": [
        _term({"type": "loop", "root_or_cartan": {"root": [-1]}, "power": [0, -1]}, "-3/2"),
        _term({"type": "c", "i": 1}),
      ],
    }
    element = element_from_json(a1_k2, value)
    assert element == -Fraction(3, 2) * a1_k2.loop(F, (0, -1)) + a1_k2.central(1)

  def test_labels_accepted(self, a1_k2: AlgebraConfig) -> None:
    assert chevalley_from_json(a1_k2, "e") == E
    assert chevalley_from_json(a1_k2, "f") == F
    assert chevalley_from_json(a1_k2, "h1") == H1
    assert chevalley_from_json(a1_k2, "e(-1)") == F

  def test_h_rejected(self, a1_k2: AlgebraConfig) -> None:
    with pytest.raises(ElementFormatError, match="2·h1"):
      chevalley_from_json(a1_k2, "h", "x")

  def test_a2_labels(self, a2: RootSystemData) -> None:
    config = AlgebraConfig(a2, 1)
    assert config.root_system.basis[chevalley_from_json(config, "e(1,1)")].label == (1, 1)
    with pytest.raises(ElementFormatError, match="not a basis element"):
      chevalley_from_json(config, "e(1,-1)")

  def test_missing_key_names_path(self, a1_k2: AlgebraConfig) -> None:
    value = {"alg": "A1", "k": 2, "terms": [{"coeff": "1"}]}
    with pytest.raises(ElementFormatError, match=r"\$\.terms\[0\]: missing key 'gen'"):
      element_from_json(a1_k2, value)

  def test_inexact_coefficient_rejected(self, a1_k2: AlgebraConfig) -> None:
    value = {"terms": [_term({"type": "c", "i": 1}, "1.5")]}
    with pytest.raises(ElementFormatError, match=r"terms\[0\]\.coeff"):
      element_from_json(a1_k2, value)

  def test_wrong_power_length(self, a1_k2: AlgebraConfig) -> None:
    value = {"terms": [_term({"type": "loop", "root_or_cartan": "e", "power": [1]})]}
    with pytest.raises(ElementFormatError, match=r"gen\.power"):
      element_from_json(a1_k2, value)

  def test_header_mismatch(self, a1_k2: AlgebraConfig) -> None:
    with pytest.raises(ElementFormatError, match=r"\$\.alg"):
      element_from_json(a1_k2, {"alg": "A2", "terms": []})
    with pytest.raises(ElementFormatError, match=r"\$\.k"):
      element_from_json(a1_k2, {"k": 3, "terms": []})

  def test_unknown_generator_type(self, a1_k2: AlgebraConfig) -> None:
    with pytest.raises(ElementFormatError, match="unknown generator type"):
      element_from_json(a1_k2, {"terms": [_term({"type": "x"})]})

  def test_parse_fraction(self) -> None:
    assert parse_fraction("-3/2", "c") == Fraction(-3, 2)
    assert parse_fraction(4, "c") == 4
    with pytest.raises(ElementFormatError):
      parse_fraction(True, "c")
    with pytest.raises(ElementFormatError, match="zero denominator"):
      parse_fraction("1/0", "c")

  def test_encode_decode(self, a1_k2: AlgebraConfig) -> None:
    element = LoopElement(
      a1_k2,
      {
        a1_k2.generator(E, (1, -2)): Fraction(1, 3),
        CentralGenerator(2): Fraction(-1),
      },
    )
    encoded = element_to_json(element)
    assert encoded["terms"][0] == {
      "coeff": "1/3",
      "gen": {"type": "loop", "root_or_cartan": {"root": [1]}, "power": [1, -2]},
    }
    assert element_from_json(a1_k2, encoded) == element


class TestElement:
  def test_zero_terms_dropped_from_a_copy(self, a1_k2: AlgebraConfig) -> None:
    e = a1_k2.generator(E, (0, -1))
    f = a1_k2.generator(F, (0, 1))
    terms = {e: Fraction(2), f: Fraction(0)}
    element = LoopElement(a1_k2, terms)
    assert element.terms == {e: Fraction(2)}
    assert terms == {e: Fraction(2), f: Fraction(0)}

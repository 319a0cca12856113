"""Tests for root systems and Chevalley structure constants."""

from fractions import Fraction

import pytest
from multiloop.algebra.root_system import (
  ChevalleyElement,
  RootSystemData,
  bracket_g,
  bracket_vectors,
  build_root_system,
  check_structure,
  dual_basis,
  form,
  form_vectors,
  parse_algebra,
  root_system_to_json,
  weyl_dimension,
  weyl_group,
)
from multiloop.algebra.series import RootSystemError, list_series
from multiloop.models import Series


class TestParseAlgebra:
  def test_parse_lowercase(self) -> None:
    assert parse_algebra("a2") == (Series.A, 2)

  def test_parse_exceptional(self) -> None:
    assert parse_algebra("E6") == (Series.E, 6)

  @pytest.mark.parametrize("name", ["A", "X1", "1A", "A1x"])
  def test_invalid_names(self, name: str) -> None:
    with pytest.raises(RootSystemError):
      parse_algebra(name)


class TestBuildRootSystem:
  def test_a1(self, a1: RootSystemData) -> None:
    assert a1.dim == 3
    assert a1.dual_coxeter == 2
    assert a1.positive_roots == ((1,),)
    assert [str(e) for e in a1.basis] == ["h1", "e(1)", "e(-1)"]

  def test_a2(self, a2: RootSystemData) -> None:
    assert a2.dim == 8
    assert a2.dual_coxeter == 3
    assert a2.highest_root == (1, 1)
    assert a2.rho == (1, 1)

  def test_d4(self) -> None:
    data = build_root_system("D", 4)
    assert data.dim == 28
    assert len(data.positive_roots) == 12
    assert data.dual_coxeter == 6

  def test_e6(self) -> None:
    data = build_root_system(Series.E, 6)
    assert len(data.positive_roots) == 36
    assert data.dual_coxeter == 12

  def test_cached(self) -> None:
    assert build_root_system("A", 2) is build_root_system("A", 2)

  def test_non_simply_laced_series_rejected(self) -> None:
    with pytest.raises(RootSystemError, match="not supported"):
      build_root_system("B", 2)

  def test_invalid_rank_rejected(self) -> None:
    with pytest.raises(RootSystemError):
      build_root_system("D", 3)
    with pytest.raises(RootSystemError):
      build_root_system("E", 5)

  def test_registered_series(self) -> None:
    assert set(list_series()) == {Series.A, Series.D, Series.E}


class TestStructureConstants:
  def test_structure_checks_a1(self, a1: RootSystemData) -> None:
    assert check_structure(a1) == []

  def test_structure_checks_a2(self, a2: RootSystemData) -> None:
    assert check_structure(a2) == []

  def test_sl2_relations(self, a1: RootSystemData) -> None:
    e = ChevalleyElement.root((1,))
    f = ChevalleyElement.root((-1,))
    h1 = ChevalleyElement.cartan(1)
    # [e, f] is the coroot, which is 2·h1 in the basis dual to the simple root
    assert bracket_g(a1, e, f) == {h1: Fraction(2)}
    assert bracket_g(a1, h1, e) == {e: Fraction(1)}
    assert bracket_g(a1, h1, f) == {f: Fraction(-1)}

  def test_normalized_form(self, a1: RootSystemData) -> None:
    e = ChevalleyElement.root((1,))
    f = ChevalleyElement.root((-1,))
    h1 = ChevalleyElement.cartan(1)
    assert form(a1, e, f) == 1
    assert form(a1, h1, h1) == Fraction(1, 2)
    assert form(a1, e, e) == 0

  def test_coroot_is_twice_dual_basis(self, a1: RootSystemData) -> None:
    h = a1.coroot((1,))
    assert h == {0: Fraction(2)}
    assert bracket_vectors(a1, h, {1: Fraction(1)}) == {1: Fraction(2)}
    assert bracket_vectors(a1, {1: Fraction(1)}, {2: Fraction(1)}) == h
    assert form_vectors(a1, h, h) == 2

  def test_dual_basis_pairs_to_identity(self, a2: RootSystemData) -> None:
    for element, dual in dual_basis(a2):
      assert sum(v * form(a2, element, x) for x, v in dual.items()) == 1

  def test_unknown_element_rejected(self, a1: RootSystemData) -> None:
    with pytest.raises(RootSystemError):
      a1.index(ChevalleyElement.root((2,)))


class TestWeylGroup:
  def test_orders(self, a1: RootSystemData, a2: RootSystemData) -> None:
    assert len(weyl_group(a1)) == 2
    assert len(weyl_group(a2)) == 6

  def test_signs(self, a2: RootSystemData) -> None:
    signs = [w.sign for w in weyl_group(a2)]
    assert signs.count(1) == 3
    assert signs.count(-1) == 3

  def test_dimensions(self, a1: RootSystemData, a2: RootSystemData) -> None:
    assert weyl_dimension(a1, (3,)) == 4
    assert weyl_dimension(a2, (1, 0)) == 3
    assert weyl_dimension(a2, (1, 1)) == 8
    assert weyl_dimension(a2, (2, 0)) == 6


class TestRootSystemJson:
  def test_keys(self, a1: RootSystemData) -> None:
    data = root_system_to_json(a1)
    assert data["series"] == "A"
    assert data["dual_coxeter"] == 2
    assert data["form_matrix"] == [["1/2"]]
    assert data["basis"] == ["h1", "e(1)", "e(-1)"]
    assert {"left": "e(1)", "right": "e(-1)", "result": {"h1": "2"}} in data[
      "structure_constants"
    ]

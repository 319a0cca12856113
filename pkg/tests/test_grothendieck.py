"""Tests for the E^k recursion in the Grothendieck group."""

import itertools
import json
import tempfile
from pathlib import Path

import pytest
from multiloop.algebra.root_system import RootSystemData
from multiloop.grothendieck import (
  CharacterPolynomial,
  DataGapError,
  GrothendieckError,
  GrothendieckVector,
  PMatrix,
  character_of,
  dominant_below,
  dominant_multiplicity,
  e_k,
  e_zero,
  identity_pmatrix,
  is_restricted,
  load_pmatrix,
  p_adic_expansion,
  pmatrix_from_json,
  prefix,
  stabilize,
  theta_bound,
  transition_check,
  weyl_character,
)


@pytest.fixture
def two_by_two(a1: RootSystemData) -> PMatrix:
  """P with one off-diagonal entry: the column of 2ω also meets 0."""
  return PMatrix(
    a1,
    2,
    {((0,), (0,)): 1, ((1,), (1,)): 1, ((2,), (2,)): 1, ((0,), (2,)): 1},
    complete_min=(0,),
    complete_max=(3,),
  )


class TestWeights:
  def test_p_adic_expansion(self) -> None:
    assert p_adic_expansion((7,), 2) == [(1,), (1,), (1,)]
    assert p_adic_expansion((5,), 3) == [(2,), (1,)]
    assert p_adic_expansion((0,), 2) == [(0,)]
    assert p_adic_expansion((3, 1), 2) == [(1, 1), (1, 0)]

  @pytest.mark.parametrize("p", [2, 3, 5])
  @pytest.mark.parametrize("rank", [1, 2])
  def test_expansion_round_trip(self, p: int, rank: int) -> None:
    for weight in itertools.product(range(21), repeat=rank):
      digits = p_adic_expansion(weight, p)
      assert all(is_restricted(d, p) for d in digits)
      total = tuple(sum(p**r * d[i] for r, d in enumerate(digits)) for i in range(rank))
      assert total == weight

  def test_expansion_rejects_negative(self) -> None:
    with pytest.raises(GrothendieckError):
      p_adic_expansion((-1,), 2)

  def test_restricted(self) -> None:
    assert is_restricted((1, 0), 2)
    assert not is_restricted((2, 0), 2)

  def test_prefix(self) -> None:
    assert prefix((7,), 2, 1) == (0,)
    assert prefix((7,), 2, 2) == (1,)
    assert prefix((7,), 2, 3) == (3,)

  def test_dominant_below(self, a1: RootSystemData, a2: RootSystemData) -> None:
    assert dominant_below(a1, (4,)) == [(4,), (2,), (0,)]
    assert dominant_below(a1, (1,)) == [(1,)]
    assert dominant_below(a2, (1, 1)) == [(1, 1), (0, 0)]

  def test_theta_bound(self, a2: RootSystemData) -> None:
    assert theta_bound(a2, (2, 1)) == 3


class TestPMatrix:
  def test_missing_entry_inside_box_is_zero(self, two_by_two: PMatrix) -> None:
    assert two_by_two.get((1,), (3,)) == 0

  def test_missing_entry_outside_box(self, a1: RootSystemData) -> None:
    matrix = PMatrix(a1, 2, {((2,), (2,)): 1})
    with pytest.raises(DataGapError):
      matrix.column((2,))

  def test_column(self, two_by_two: PMatrix) -> None:
    assert two_by_two.column((2,)) == {(2,): 1, (0,): 1}

  def test_from_json(self) -> None:
    value = {
      "alg": "A1",
      "p": 2,
      "entries": [{"mu": [0], "lambda": [2], "value": 1}, {"mu": 2, "lambda": 2, "value": 1}],
      "complete_on": {"min": [0], "max": [2]},
    }
    matrix = pmatrix_from_json(value)
    assert matrix.entries == {((0,), (2,)): 1, ((2,), (2,)): 1}
    assert matrix.complete_max == (2,)
    assert pmatrix_from_json(matrix.to_json()) == matrix

  @pytest.mark.parametrize(
    "value",
    [
      [],
      {"alg": "A1", "entries": []},
      {"alg": "A1", "p": 1, "entries": []},
      {"alg": "A1", "p": 2, "entries": [{"mu": [0, 0], "lambda": [0], "value": 1}]},
      {"alg": "A1", "p": 2, "entries": [{"mu": [0], "lambda": [0], "value": "1"}]},
    ],
  )
  def test_malformed(self, value: object) -> None:
    with pytest.raises(GrothendieckError):
      pmatrix_from_json(value)

  def test_load_invalid_json(self) -> None:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".json", delete=False) as f:
      f.write("{not json")
    with pytest.raises(GrothendieckError, match="invalid JSON"):
      load_pmatrix(Path(f.name))

  def test_diagonal_warnings(self, a1: RootSystemData) -> None:
    matrix = PMatrix(a1, 2, {((1,), (1,)): 2})
    assert matrix.diagonal_warnings() == ["P[[1], [1]] = 2, expected 1 on the diagonal"]


class TestRecursion:
  def test_identity_law(self, a1: RootSystemData) -> None:
    matrix = identity_pmatrix(a1, 2, 7)
    for k in range(4):
      assert e_k((7,), k, matrix) == e_zero((7,))

  def test_identity_stabilizes_at_one(self, a2: RootSystemData) -> None:
    result = stabilize((2, 1), identity_pmatrix(a2, 3, 3), k_max=4)
    assert result.k_stable == 1
    assert result.value == e_zero((2, 1))

  def test_two_by_two(self, two_by_two: PMatrix) -> None:
    expected = GrothendieckVector({(2,): 1, (0,): 1})
    assert e_k((2,), 1, two_by_two) == expected
    assert e_k((2,), 2, two_by_two) == expected
    result = stabilize((2,), two_by_two, k_max=5)
    assert result.k_stable == 2
    assert [v.to_json() for v in result.history[:2]] == [
      [{"weight": [2], "coeff": 1}],
      [{"weight": [0], "coeff": 1}, {"weight": [2], "coeff": 1}],
    ]

  def test_no_levels(self, two_by_two: PMatrix) -> None:
    result = stabilize((2,), two_by_two, k_max=0)
    assert result.k_stable is None
    assert result.value == e_zero((2,))

  def test_transition_shape(self, two_by_two: PMatrix) -> None:
    [check] = transition_check([(2,)], 1, two_by_two)
    assert check.passed
    assert check.diagonal == 1

  def test_negative_k(self, two_by_two: PMatrix) -> None:
    with pytest.raises(GrothendieckError):
      e_k((2,), -1, two_by_two)


class TestCharacters:
  def test_sl2_adjoint(self, a1: RootSystemData) -> None:
    assert weyl_character(a1, (2,)) == CharacterPolynomial({(2,): 1, (0,): 1, (-2,): 1})

  def test_a2_standard(self, a2: RootSystemData) -> None:
    character = weyl_character(a2, (1, 0))
    assert character.dimension == 3
    assert set(character.terms) == {(1, 0), (-1, 1), (0, -1)}

  def test_a2_adjoint_zero_weight(self, a2: RootSystemData) -> None:
    assert dominant_multiplicity(a2, (1, 1), (0, 0)) == 2
    assert weyl_character(a2, (1, 1)).dimension == 8

  def test_difference(self, a1: RootSystemData) -> None:
    vector = e_zero((2,)) - e_zero((0,))
    assert character_of(a1, vector) == CharacterPolynomial({(2,): 1, (-2,): 1})

  def test_non_dominant(self, a1: RootSystemData) -> None:
    with pytest.raises(GrothendieckError, match="not dominant"):
      weyl_character(a1, (-1,))

  def test_arithmetic(self) -> None:
    vector = 2 * e_zero((1,)) + e_zero((0,)) - e_zero((1,))
    assert vector == GrothendieckVector({(1,): 1, (0,): 1})
    assert (vector - vector).is_zero
    assert json.dumps(vector.to_json()) == (
      '[{"weight": [0], "coeff": 1}, {"weight": [1], "coeff": 1}]'
    )

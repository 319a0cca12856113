"""Root systems, Chevalley bases and the normalized invariant form.

Conventions:
  - Roots are tuples of coordinates in the simple-root basis.
  - Weights are tuples of coordinates in the fundamental-weight basis, so
    ``λ(α_i∨) = λ[i]``.
  - The Cartan subalgebra uses the basis ``h_1, ..., h_r`` dual to the simple roots,
    ``α_j(h_i) = δ_ij``. A Cartan element is stored by its values on the simple roots.
    This is not the Chevalley ``h``: for A1, ``⟨h_1, h_1⟩ = 1/2`` and ``[h_1, e] = e``,
    while ``[h, e] = 2e`` and ``⟨h, h⟩ = 2`` hold for the coroot ``h = α∨ = 2 h_1``.
  - Root vectors follow the sign cocycle ``ε(α_i, α_j) = -1`` when ``i == j`` or when
    ``i < j`` and ``a_ij = -1``. With ``e_α = E_α`` for positive ``α`` and
    ``e_{-α} = -E_{-α}`` one gets ``[e_α, e_{-α}] = α∨`` and ``⟨e_α, e_{-α}⟩ = 1``, and
    ``N_{-α,-β} = -N_{α,β}``.
  - The basis order is ``h_1..h_r``, positive roots by (height, label), then negative
    roots by (height, label of the positive root).
"""

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from multiloop.algebra.series import CartanMatrix, RootSystemError, get_cartan_matrix
from multiloop.linalg import dense, solve_unique
from multiloop.models import ElementKind, Series

Root = tuple[int, ...]
Weight = tuple[int, ...]
GVector = dict[int, Fraction]


@dataclass(frozen=True)
class ChevalleyElement:
  """A Chevalley basis element: ``h_i`` (1-based ``i``) or the root vector ``e_β``."""

  kind: ElementKind
  label: tuple[int, ...]

  @classmethod
  def cartan(cls, i: int) -> "ChevalleyElement":
    return cls(ElementKind.CARTAN, (i,))

  @classmethod
  def root(cls, beta: Sequence[int]) -> "ChevalleyElement":
    return cls(ElementKind.ROOT, tuple(beta))

  @property
  def is_cartan(self) -> bool:
    return self.kind == ElementKind.CARTAN

  def __str__(self) -> str:
    if self.is_cartan:
      return f"h{self.label[0]}"
    return "e(" + ",".join(str(c) for c in self.label) + ")"


@dataclass(frozen=True)
class WeylElement:
  """A Weyl group element as a reduced word and its matrix on weight coordinates."""

  word: tuple[int, ...]
  matrix: tuple[tuple[int, ...], ...]

  @property
  def sign(self) -> int:
    return -1 if len(self.word) % 2 else 1

  def apply(self, weight: Sequence[int]) -> Weight:
    return tuple(sum(row[j] * weight[j] for j in range(len(weight))) for row in self.matrix)


@dataclass(frozen=True)
class RootSystemData:
  """Combinatorics and structure constants of a simple Lie algebra."""

  series: Series
  rank: int
  cartan_matrix: CartanMatrix
  positive_roots: tuple[Root, ...]
  highest_root: Root
  rho: Weight
  dual_coxeter: int
  form_matrix: tuple[tuple[Fraction, ...], ...]
  basis: tuple[ChevalleyElement, ...] = field(repr=False, compare=False)
  _index: dict[ChevalleyElement, int] = field(repr=False, compare=False)
  _brackets: dict[tuple[int, int], GVector] = field(repr=False, compare=False)
  _forms: dict[tuple[int, int], Fraction] = field(repr=False, compare=False)

  @property
  def name(self) -> str:
    return f"{self.series.value}{self.rank}"

  @property
  def dim(self) -> int:
    return len(self.basis)

  @property
  def simple_roots(self) -> tuple[Weight, ...]:
    """Simple roots as weight-lattice vectors."""
    return tuple(self.root_weight(self._unit(i)) for i in range(self.rank))

  @property
  def roots(self) -> tuple[Root, ...]:
    return self.positive_roots + tuple(_neg(beta) for beta in self.positive_roots)

  def _unit(self, i: int) -> Root:
    return tuple(1 if j == i else 0 for j in range(self.rank))

  def index(self, element: ChevalleyElement) -> int:
    """Position of a basis element in the canonical order."""
    try:
      return self._index[element]
    except KeyError:
      raise RootSystemError(f"{element} is not a basis element of {self.name}") from None

  def cartan_indices(self) -> range:
    return range(self.rank)

  def root_index(self, beta: Sequence[int]) -> int:
    return self.index(ChevalleyElement.root(beta))

  def is_root(self, beta: Sequence[int]) -> bool:
    return ChevalleyElement.root(beta) in self._index

  def is_cartan(self, i: int) -> bool:
    return i < self.rank

  def root_of(self, i: int) -> Root:
    """Root of a basis element (zero for Cartan elements)."""
    if i < self.rank:
      return (0,) * self.rank
    return self.basis[i].label

  def root_weight(self, beta: Sequence[int]) -> Weight:
    """Convert simple-root coordinates to fundamental-weight coordinates."""
    a = self.cartan_matrix
    return tuple(sum(beta[j] * a[i][j] for j in range(self.rank)) for i in range(self.rank))

  def weight_of(self, i: int) -> Weight:
    return self.root_weight(self.root_of(i))

  def bracket(self, i: int, j: int) -> Mapping[int, Fraction]:
    """Structure constants ``[x_i, x_j]`` on basis indices."""
    return self._brackets.get((i, j), _EMPTY)

  def form(self, i: int, j: int) -> Fraction:
    return self._forms.get((i, j), Fraction(0))

  def pair(self, left: Sequence[int | Fraction], right: Sequence[int | Fraction]) -> Fraction:
    """Invariant form on weights given in fundamental coordinates."""
    f = self.form_matrix
    return sum(
      (Fraction(left[i]) * f[i][j] * right[j] for i in range(self.rank) for j in range(self.rank)),
      Fraction(0),
    )

  def coroot(self, beta: Sequence[int]) -> GVector:
    """Coroot of ``β`` in the ``h_i`` basis (integer entries for simply-laced types)."""
    weight = self.root_weight(beta)
    return {i: Fraction(v) for i, v in enumerate(weight) if v}

  def dual(self, i: int) -> GVector:
    """Dual basis element of ``x_i`` with respect to the invariant form."""
    if i < self.rank:
      return {j: Fraction(v) for j, v in enumerate(self.cartan_matrix[i]) if v}
    return {self.root_index(_neg(self.basis[i].label)): Fraction(1)}


_EMPTY: Mapping[int, Fraction] = {}


def _neg(beta: Sequence[int]) -> Root:
  return tuple(-c for c in beta)


def _add(a: Sequence[int], b: Sequence[int]) -> Root:
  return tuple(x + y for x, y in zip(a, b, strict=True))


def _height(beta: Sequence[int]) -> int:
  return sum(beta)


def parse_algebra(name: str) -> tuple[Series, int]:
  """Parse a type string such as ``"A2"`` into (series, rank)."""
  text = name.strip().upper()
  if len(text) < 2 or not text[1:].isdigit():
    raise RootSystemError(f"Invalid algebra '{name}'. Expected a series letter and rank, e.g. A1")
  try:
    series = Series(text[0])
  except ValueError:
    raise RootSystemError(f"Unknown series '{text[0]}' in '{name}'") from None
  return series, int(text[1:])


def _positive_roots(cartan: CartanMatrix) -> tuple[Root, ...]:
  """Enumerate positive roots of a simply-laced type by height."""
  rank = len(cartan)
  simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
  found = set(simple)
  layer = list(simple)
  while layer:
    nxt: list[Root] = []
    for beta in layer:
      for i in range(rank):
        inner = sum(beta[j] * cartan[j][i] for j in range(rank))
        if inner == -1:
          gamma = _add(beta, simple[i])
          if gamma not in found:
            found.add(gamma)
            nxt.append(gamma)
    layer = nxt
  return tuple(sorted(found, key=lambda b: (_height(b), b)))


def _sign_cocycle(cartan: CartanMatrix, a: Root, b: Root) -> int:
  exponent = 0
  rank = len(cartan)
  for i in range(rank):
    for j in range(rank):
      if i == j or (i < j and cartan[i][j] == -1):
        exponent += a[i] * b[j]
  return -1 if exponent % 2 else 1


def _inverse(cartan: CartanMatrix) -> tuple[tuple[Fraction, ...], ...]:
  rank = len(cartan)
  rows = dense([[Fraction(v) for v in row] for row in cartan])
  columns = []
  for j in range(rank):
    unit = [Fraction(1 if i == j else 0) for i in range(rank)]
    column = solve_unique(rows, rank, unit)
    if column is None:
      raise RootSystemError("Cartan matrix is singular")
    columns.append(column)
  return tuple(tuple(columns[j][i] for j in range(rank)) for i in range(rank))


@lru_cache(maxsize=None)
def build_root_system(series: Series | str, rank: int) -> RootSystemData:
  """Build the root system and Chevalley structure constants of a simple type.

  Results are cached, so two calls with the same arguments return the same object.
  """
  if isinstance(series, str):
    series = Series(series.upper())
  cartan = get_cartan_matrix(series, rank)
  if any(cartan[i][j] != cartan[j][i] for i in range(rank) for j in range(rank)):
    raise RootSystemError(f"{series.value}{rank} is not simply laced")

  positive = _positive_roots(cartan)
  negative = tuple(_neg(beta) for beta in positive)
  basis = tuple(ChevalleyElement.cartan(i + 1) for i in range(rank)) + tuple(
    ChevalleyElement.root(beta) for beta in positive + negative
  )
  index = {element: i for i, element in enumerate(basis)}
  inverse = _inverse(cartan)

  def sign(beta: Root) -> int:
    return 1 if _height(beta) > 0 else -1

  brackets: dict[tuple[int, int], GVector] = {}
  forms: dict[tuple[int, int], Fraction] = {}
  for i in range(rank):
    for j in range(rank):
      if inverse[i][j]:
        forms[(i, j)] = inverse[i][j]
  roots = positive + negative
  for beta in roots:
    b = index[ChevalleyElement.root(beta)]
    forms[(b, index[ChevalleyElement.root(_neg(beta))])] = Fraction(1)
    for i in range(rank):
      if beta[i]:
        brackets[(i, b)] = {b: Fraction(beta[i])}
        brackets[(b, i)] = {b: Fraction(-beta[i])}
  for alpha, beta in itertools.product(roots, repeat=2):
    a = index[ChevalleyElement.root(alpha)]
    b = index[ChevalleyElement.root(beta)]
    total = _add(alpha, beta)
    if not any(total):
      weight = tuple(sum(alpha[j] * cartan[i][j] for j in range(rank)) for i in range(rank))
      brackets[(a, b)] = {i: Fraction(v) for i, v in enumerate(weight) if v}
    elif ChevalleyElement.root(total) in index:
      n = sign(alpha) * sign(beta) * sign(total) * _sign_cocycle(cartan, alpha, beta)
      brackets[(a, b)] = {index[ChevalleyElement.root(total)]: Fraction(n)}

  theta = positive[-1]
  rho = (1,) * rank
  data = RootSystemData(
    series=series,
    rank=rank,
    cartan_matrix=cartan,
    positive_roots=positive,
    highest_root=theta,
    rho=rho,
    dual_coxeter=1 + _height(theta),
    form_matrix=inverse,
    basis=basis,
    _index=index,
    _brackets=brackets,
    _forms=forms,
  )
  _check_normalization(data)
  return data


def _check_normalization(data: RootSystemData) -> None:
  theta = data.root_weight(data.highest_root)
  if data.pair(theta, theta) != 2:
    raise RootSystemError(f"{data.name}: <theta, theta> != 2")
  # For a long root θ∨ = 2θ/<θ,θ> = θ under the identification given by the form.
  if data.dual_coxeter != 1 + data.pair(data.rho, theta):
    raise RootSystemError(f"{data.name}: dual Coxeter number mismatch")
  simple = data.simple_roots
  for i in range(data.rank):
    for j in range(data.rank):
      value = 2 * data.pair(simple[i], simple[j]) / data.pair(simple[j], simple[j])
      if value != data.cartan_matrix[i][j]:
        raise RootSystemError(f"{data.name}: Cartan entry ({i}, {j}) not recovered")


def bracket_vectors(
  data: RootSystemData, x: Mapping[int, Fraction], y: Mapping[int, Fraction]
) -> GVector:
  """Bracket of two elements of g given as coefficient maps on basis indices."""
  out: GVector = {}
  for i, a in x.items():
    for j, b in y.items():
      for k, c in data.bracket(i, j).items():
        out[k] = out.get(k, Fraction(0)) + a * b * c
  return {k: v for k, v in out.items() if v}


def form_vectors(
  data: RootSystemData, x: Mapping[int, Fraction], y: Mapping[int, Fraction]
) -> Fraction:
  return sum((a * b * data.form(i, j) for i, a in x.items() for j, b in y.items()), Fraction(0))


def _named(
  data: RootSystemData, vector: Mapping[int, Fraction]
) -> dict[ChevalleyElement, Fraction]:
  return {data.basis[i]: v for i, v in sorted(vector.items())}


def bracket_g(
  data: RootSystemData, a: ChevalleyElement, b: ChevalleyElement
) -> dict[ChevalleyElement, Fraction]:
  """Bracket of two Chevalley basis elements."""
  return _named(data, data.bracket(data.index(a), data.index(b)))


def form(data: RootSystemData, a: ChevalleyElement, b: ChevalleyElement) -> Fraction:
  """Normalized invariant form, ``⟨θ, θ⟩ = 2``."""
  return data.form(data.index(a), data.index(b))


def dual_basis(
  data: RootSystemData,
) -> list[tuple[ChevalleyElement, dict[ChevalleyElement, Fraction]]]:
  """Pairs ``(e_j, e^j)`` with ``⟨e_i, e^j⟩ = δ_ij``."""
  return [(data.basis[i], _named(data, data.dual(i))) for i in range(data.dim)]


def casimir_action(data: RootSystemData, x: Mapping[int, Fraction]) -> GVector:
  """``Σ_j [[x, e_j], e^j]``, which equals ``2h∨ x``."""
  out: GVector = {}
  for j in range(data.dim):
    inner = bracket_vectors(data, x, {j: Fraction(1)})
    for k, v in bracket_vectors(data, inner, data.dual(j)).items():
      out[k] = out.get(k, Fraction(0)) + v
  return {k: v for k, v in out.items() if v}


def weyl_group(data: RootSystemData) -> tuple[WeylElement, ...]:
  """Enumerate the Weyl group breadth-first from the simple reflections."""
  rank = data.rank
  columns = [data.simple_roots[i] for i in range(rank)]

  def reflect(i: int, weight: Weight) -> Weight:
    return tuple(weight[j] - weight[i] * columns[i][j] for j in range(rank))

  identity = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
  seen: dict[Weight, WeylElement] = {data.rho: WeylElement(word=(), matrix=identity)}
  layer = [seen[data.rho]]
  while layer:
    nxt: list[WeylElement] = []
    for element in layer:
      for i in range(rank):
        image = reflect(i, element.apply(data.rho))
        if image in seen:
          continue
        # s_i ∘ w: reflect every column of w's matrix.
        cols = [reflect(i, tuple(row[c] for row in element.matrix)) for c in range(rank)]
        matrix = tuple(tuple(cols[c][r] for c in range(rank)) for r in range(rank))
        created = WeylElement(word=(i + 1,) + element.word, matrix=matrix)
        seen[image] = created
        nxt.append(created)
    layer = nxt
  return tuple(sorted(seen.values(), key=lambda w: (len(w.word), w.word)))


def weyl_dimension(data: RootSystemData, weight: Sequence[int]) -> int:
  """Dimension of ``V(λ)`` by the Weyl dimension formula."""
  shifted = tuple(w + r for w, r in zip(weight, data.rho, strict=True))
  value = Fraction(1)
  for beta in data.positive_roots:
    root = data.root_weight(beta)
    value *= data.pair(shifted, root) / data.pair(data.rho, root)
  if value.denominator != 1:
    raise RootSystemError(f"Weyl dimension of {tuple(weight)} is not an integer: {value}")
  return int(value)


def check_structure(data: RootSystemData) -> list[str]:
  """Exact structure checks over all basis pairs and triples; returns failures."""
  failures: list[str] = []
  n = data.dim
  names = [str(e) for e in data.basis]
  units = [{i: Fraction(1)} for i in range(n)]
  for i, j in itertools.product(range(n), repeat=2):
    a = dict(data.bracket(i, j))
    b = {k: -v for k, v in data.bracket(j, i).items()}
    if a != b:
      failures.append(f"antisymmetry [{names[i]}, {names[j]}]")
    if data.form(i, j) != data.form(j, i):
      failures.append(f"form symmetry <{names[i]}, {names[j]}>")
  for i, j, k in itertools.product(range(n), repeat=3):
    xy = bracket_vectors(data, units[i], units[j])
    total: GVector = {}
    for part in (
      bracket_vectors(data, xy, units[k]),
      bracket_vectors(data, bracket_vectors(data, units[j], units[k]), units[i]),
      bracket_vectors(data, bracket_vectors(data, units[k], units[i]), units[j]),
    ):
      for key, v in part.items():
        total[key] = total.get(key, Fraction(0)) + v
    if any(total.values()):
      failures.append(f"Jacobi ({names[i]}, {names[j]}, {names[k]})")
    left = form_vectors(data, xy, units[k])
    right = form_vectors(data, units[i], bracket_vectors(data, units[j], units[k]))
    if left != right:
      failures.append(f"invariance ({names[i]}, {names[j]}, {names[k]})")
  for i in range(n):
    for j in range(n):
      expected = Fraction(1 if i == j else 0)
      if form_vectors(data, units[i], data.dual(j)) != expected:
        failures.append(f"dual basis <{names[i]}, e^{names[j]}>")
    casimir = casimir_action(data, units[i])
    if casimir != {i: Fraction(2 * data.dual_coxeter)}:
      failures.append(f"Casimir identity at {names[i]}")
    # [x, Σ e_j ⊗ e^j] = 0 in g ⊗ g
    tensor: dict[tuple[int, int], Fraction] = {}
    for j in range(n):
      for a, va in bracket_vectors(data, units[i], units[j]).items():
        for b, vb in data.dual(j).items():
          tensor[(a, b)] = tensor.get((a, b), Fraction(0)) + va * vb
      for b, vb in bracket_vectors(data, units[i], data.dual(j)).items():
        tensor[(j, b)] = tensor.get((j, b), Fraction(0)) + vb
    if any(tensor.values()):
      failures.append(f"Casimir tensor invariance at {names[i]}")
  return failures


def root_system_to_json(data: RootSystemData) -> dict[str, object]:
  """Serialize a root system, including the structure-constant table."""
  table = []
  for (i, j), value in sorted(data._brackets.items()):
    table.append({
      "left": str(data.basis[i]),
      "right": str(data.basis[j]),
      "result": {str(data.basis[k]): str(v) for k, v in sorted(value.items())},
    })
  return {
    "series": data.series.value,
    "rank": data.rank,
    "cartan_matrix": [list(row) for row in data.cartan_matrix],
    "positive_roots": [list(beta) for beta in data.positive_roots],
    "simple_roots": [list(alpha) for alpha in data.simple_roots],
    "highest_root": list(data.highest_root),
    "rho": list(data.rho),
    "dual_coxeter": data.dual_coxeter,
    "form_matrix": [[str(v) for v in row] for row in data.form_matrix],
    "basis": [str(e) for e in data.basis],
    "structure_constants": table,
  }

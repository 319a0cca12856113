"""JSON encoding of loop algebra elements.

Element format::

  {"alg": "A1", "k": 2,
   "terms": [{"coeff": "-3/2", "gen": {"type": "loop", "root_or_cartan": {"root": [-1]},
                                      "power": [0, -1]}},
             {"coeff": "1", "gen": {"type": "c", "i": 1}}]}

``root_or_cartan`` is ``{"cartan": i}`` (1-based), ``{"root": [...]}`` in simple-root
coordinates, or a basis label such as ``"h1"`` or ``"e(1,-1)"``; for A1 the names
``"e"`` and ``"f"`` are accepted too. The coroot ``h`` of A1 is ``2·h1``.
"""

import re
from fractions import Fraction
from typing import Any

from multiloop.algebra.loop_algebra import (
  AlgebraConfig,
  CentralGenerator,
  DerivationGenerator,
  Generator,
  LoopElement,
  LoopGenerator,
)
from multiloop.algebra.root_system import ChevalleyElement
from multiloop.errors import DataError

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_ROOT_LABEL = re.compile(r"^e\((-?\d+(?:,-?\d+)*)\)$")


class ElementFormatError(DataError):
  """Malformed element JSON; the message names the offending path."""


def format_fraction(value: Fraction) -> str:
  if value.denominator == 1:
    return str(value.numerator)
  return f"{value.numerator}/{value.denominator}"


def parse_fraction(value: Any, path: str) -> Fraction:
  if isinstance(value, bool):
    raise ElementFormatError(f"{path}: expected a rational, got {value!r}")
  if isinstance(value, int):
    return Fraction(value)
  if isinstance(value, str) and _RATIONAL.match(value.strip()):
    try:
      return Fraction(value.strip())
    except ZeroDivisionError:
      raise ElementFormatError(f"{path}: zero denominator in {value!r}") from None
  raise ElementFormatError(f"{path}: expected an exact rational like \"-3/2\", got {value!r}")


def _require(data: Any, key: str, path: str) -> Any:
  if not isinstance(data, dict) or key not in data:
    raise ElementFormatError(f"{path}: missing key '{key}'")
  return data[key]


def _int_list(value: Any, path: str) -> tuple[int, ...]:
  if not isinstance(value, list) or not all(
    isinstance(v, int) and not isinstance(v, bool) for v in value
  ):
    raise ElementFormatError(f"{path}: expected a list of integers, got {value!r}")
  return tuple(value)


def chevalley_from_json(config: AlgebraConfig, value: Any, path: str = "x") -> int:
  """Basis index of a Chevalley element written as JSON or as a label."""
  data = config.root_system
  element: ChevalleyElement | None = None
  if isinstance(value, dict) and "cartan" in value:
    index = value["cartan"]
    if not isinstance(index, int) or not 1 <= index <= data.rank:
      raise ElementFormatError(f"{path}.cartan: index {index!r} out of range 1..{data.rank}")
    return index - 1
  if isinstance(value, dict) and "root" in value:
    element = ChevalleyElement.root(_int_list(value["root"], f"{path}.root"))
  elif isinstance(value, str):
    text = value.strip()
    if data.rank == 1 and text in ("e", "f"):
      element = ChevalleyElement.root((1,) if text == "e" else (-1,))
    elif data.rank == 1 and text == "h":
      raise ElementFormatError(
        f"{path}: 'h' is 2·h1, not a basis symbol; use \"h1\" with coefficient 2"
      )
    elif text.startswith("h") and text[1:].isdigit():
      return chevalley_from_json(config, {"cartan": int(text[1:])}, path)
    elif match := _ROOT_LABEL.match(text.replace(" ", "")):
      element = ChevalleyElement.root(tuple(int(c) for c in match.group(1).split(",")))
  if element is None or not data.is_root(element.label):
    raise ElementFormatError(f"{path}: {value!r} is not a basis element of {data.name}")
  return data.index(element)


def generator_from_json(config: AlgebraConfig, value: Any, path: str = "gen") -> Generator:
  kind = _require(value, "type", path)
  if kind == "loop":
    target = _require(value, "root_or_cartan", path)
    element = chevalley_from_json(config, target, f"{path}.root_or_cartan")
    power = _int_list(_require(value, "power", path), f"{path}.power")
    if len(power) != config.k:
      raise ElementFormatError(f"{path}.power: expected {config.k} exponents, got {len(power)}")
    return LoopGenerator(element, power)
  if kind in ("c", "d"):
    i = _require(value, "i", path)
    if not isinstance(i, int) or not 1 <= i <= config.k:
      raise ElementFormatError(f"{path}.i: index {i!r} out of range 1..{config.k}")
    return CentralGenerator(i) if kind == "c" else DerivationGenerator(i)
  raise ElementFormatError(f"{path}.type: unknown generator type {kind!r}")


def generator_to_json(config: AlgebraConfig, generator: Generator) -> dict[str, Any]:
  if isinstance(generator, CentralGenerator):
    return {"type": "c", "i": generator.i}
  if isinstance(generator, DerivationGenerator):
    return {"type": "d", "i": generator.i}
  data = config.root_system
  basis = data.basis[generator.element]
  target: dict[str, Any]
  if basis.is_cartan:
    target = {"cartan": basis.label[0]}
  else:
    target = {"root": list(basis.label)}
  return {"type": "loop", "root_or_cartan": target, "power": list(generator.power)}


def _terms(value: Any, key: str, path: str) -> list[Any]:
  items = _require(value, key, path)
  if not isinstance(items, list):
    raise ElementFormatError(f"{path}.{key}: expected a list")
  return items


def check_header(config: AlgebraConfig, value: Any, path: str = "$") -> None:
  """Reject documents whose ``alg`` or ``k`` disagree with the configured algebra."""
  if not isinstance(value, dict):
    raise ElementFormatError(f"{path}: expected an object")
  if "k" in value and value["k"] != config.k:
    raise ElementFormatError(f"{path}.k: expected {config.k}, got {value['k']!r}")
  if "alg" in value and str(value["alg"]).upper() != config.root_system.name:
    raise ElementFormatError(
      f"{path}.alg: expected {config.root_system.name}, got {value['alg']!r}"
    )


def element_from_json(config: AlgebraConfig, value: Any, path: str = "$") -> LoopElement:
  check_header(config, value, path)
  terms: dict[Generator, Fraction] = {}
  for i, item in enumerate(_terms(value, "terms", path)):
    item_path = f"{path}.terms[{i}]"
    generator = generator_from_json(config, _require(item, "gen", item_path), f"{item_path}.gen")
    coefficient = parse_fraction(_require(item, "coeff", item_path), f"{item_path}.coeff")
    terms[generator] = terms.get(generator, Fraction(0)) + coefficient
  return LoopElement(config, terms)


def element_to_json(element: LoopElement) -> dict[str, Any]:
  config = element.config
  return {
    "alg": config.root_system.name,
    "k": config.k,
    "terms": [
      {"coeff": format_fraction(v), "gen": generator_to_json(config, g)}
      for g, v in element.sorted_terms()
    ],
  }

"""Config file discovery and parsing."""

from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from multiloop.config.settings import Settings
from multiloop.errors import DataError
from multiloop.models import OutputFormat

CONFIG_FILENAMES = [".multiloop.yaml", ".multiloop.yml", "multiloop.yaml", "multiloop.yml"]


def _find_config_file(config_path: Path | None = None) -> Path | None:
  """The explicit path, else the first known config name in the working directory."""
  if config_path:
    return config_path
  candidates = (Path.cwd() / name for name in CONFIG_FILENAMES)
  return next((path for path in candidates if path.exists()), None)


def load_config(config_path: Path | None = None) -> Settings:
  """Settings from a YAML file, or from defaults and ``MULTILOOP_*`` variables."""
  path = _find_config_file(config_path)
  return _load_from_file(path) if path else Settings()


def _load_from_file(path: Path) -> Settings:
  if not path.exists():
    raise FileNotFoundError(f"Config file not found: {path}")
  try:
    data = yaml.safe_load(path.read_text()) or {}
  except yaml.YAMLError as e:
    raise DataError(f"{path}: invalid YAML: {e}") from None
  if not isinstance(data, dict):
    raise DataError(f"{path}: expected a mapping at the top level")
  return _parse_config(data)


def _parse_config(data: dict[str, Any]) -> Settings:
  """Convert the enum and path fields, then validate."""
  values = dict(data)
  if "format" in values:
    try:
      values["format"] = OutputFormat(values["format"])
    except ValueError:
      raise DataError(f"Unknown format '{values['format']}'") from None
  if values.get("golden_dir") is not None:
    values["golden_dir"] = Path(values["golden_dir"])
  try:
    return Settings(**values)
  except ValidationError as e:
    raise DataError(f"Invalid configuration: {e}") from None

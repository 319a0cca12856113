"""Tests for configuration loading."""

import tempfile
from pathlib import Path

import pytest
from multiloop.config.loader import _parse_config, load_config
from multiloop.config.settings import Settings
from multiloop.errors import DataError
from multiloop.models import OutputFormat


def _write(content: str) -> Path:
  with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
    f.write(content)
  return Path(f.name)


class TestSettings:
  def test_default_settings(self) -> None:
    settings = Settings()
    assert settings.seed == 20240501
    assert settings.jobs == 1
    assert settings.p == 2
    assert settings.depth == 3
    assert settings.lateral == 3
    assert settings.window == 5
    assert settings.kmax == 5
    assert settings.format == OutputFormat.JSON
    assert settings.golden_dir is None

  def test_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MULTILOOP_SEED", "7")
    monkeypatch.setenv("MULTILOOP_DEPTH", "1")
    settings = Settings()
    assert settings.seed == 7
    assert settings.depth == 1

  def test_override_skips_none(self) -> None:
    settings = Settings().override(seed=11, depth=None, format=OutputFormat.MARKDOWN)
    assert settings.seed == 11
    assert settings.depth == 3
    assert settings.format == OutputFormat.MARKDOWN

  def test_hashable_ignores_formatting(self) -> None:
    plain = Settings()
    assert plain.hashable() == Settings(format=OutputFormat.MARKDOWN, jobs=4).hashable()
    assert plain.hashable() != Settings(seed=1).hashable()
    assert set(plain.hashable()) == {"seed", "p", "depth", "lateral", "window", "kmax"}


class TestConfigLoader:
  def test_load_default_config(self) -> None:
    settings = load_config()
    assert isinstance(settings, Settings)

  def test_load_from_file(self) -> None:
    path = _write(
      """
seed: 42
p: 3
depth: 2
lateral: 1
format: markdown
golden_dir: tests/golden
"""
    )
    settings = load_config(path)
    assert settings.seed == 42
    assert settings.p == 3
    assert settings.depth == 2
    assert settings.lateral == 1
    assert settings.format == OutputFormat.MARKDOWN
    assert settings.golden_dir == Path("tests/golden")

  def test_empty_file(self) -> None:
    assert load_config(_write("")) == Settings()

  def test_missing_file(self) -> None:
    with pytest.raises(FileNotFoundError):
      load_config(Path("/nonexistent/multiloop.yaml"))

  def test_invalid_yaml(self) -> None:
    with pytest.raises(DataError, match="invalid YAML"):
      load_config(_write("seed: [1, 2\n"))

  def test_not_a_mapping(self) -> None:
    with pytest.raises(DataError, match="mapping"):
      load_config(_write("- 1\n- 2\n"))

  def test_parse_config_with_enums(self) -> None:
    settings = _parse_config({"format": "terminal", "kmax": 2})
    assert settings.format == OutputFormat.TERMINAL
    assert settings.kmax == 2

  def test_unknown_format(self) -> None:
    with pytest.raises(DataError, match="Unknown format 'html'"):
      _parse_config({"format": "html"})

  @pytest.mark.parametrize("data", [{"p": 1}, {"jobs": 0}, {"depth": -1}])
  def test_out_of_range(self, data: dict) -> None:
    with pytest.raises(DataError, match="Invalid configuration"):
      _parse_config(data)

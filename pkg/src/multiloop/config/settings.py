"""Run settings shared by every subcommand."""

from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from multiloop.models import OutputFormat


class Settings(BaseSettings):
  """Seeds, truncation boxes and report options.

  Fields can also be set through ``MULTILOOP_<FIELD>`` environment variables; values from a
  config file take precedence over the environment, and CLI flags over both.
  """

  model_config = SettingsConfigDict(env_prefix="MULTILOOP_", use_enum_values=False)

  seed: int = 20240501
  jobs: int = Field(default=1, ge=1)
  p: int = Field(default=2, ge=2)
  depth: int = Field(default=3, ge=0)
  lateral: int = Field(default=3, ge=0)
  window: int = Field(default=5, ge=0)
  kmax: int = Field(default=5, ge=0)
  format: OutputFormat = OutputFormat.JSON
  golden_dir: Path | None = None

  def override(self, **values: Any) -> "Settings":
    """Copy with every non-None value replaced."""
    return self.model_copy(update={k: v for k, v in values.items() if v is not None})

  def hashable(self) -> dict[str, Any]:
    """Fields that change results; report formatting is left out."""
    return {
      "seed": self.seed,
      "p": self.p,
      "depth": self.depth,
      "lateral": self.lateral,
      "window": self.window,
      "kmax": self.kmax,
    }

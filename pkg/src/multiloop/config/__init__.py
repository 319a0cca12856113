"""Configuration management."""

from multiloop.config.loader import load_config
from multiloop.config.settings import Settings

__all__ = ["Settings", "load_config"]

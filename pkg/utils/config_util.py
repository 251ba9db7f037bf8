"""
Configuration loading for frobmod.

Reads config/parameters.yaml (or the file named by FROBMOD_CONFIG) and merges it
over the built-in defaults, so a partial file only overrides what it names.
"""

import copy
import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).parent.parent / "config" / "parameters.yaml"

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "arithmetic": {
        "max_extension_degree": 32,
    },
    "frobmod": {
        "max_power": 12,
    },
    "stable_structure": {
        "s_max": 12,
        "enumeration_cap": 1_000_000,
        "geometric_enumeration_cap": 20_000,
        "order_bound": 4096,
    },
    "submodules": {
        "m_max": 16,
        "degree_guard": 10_000,
    },
    "certifier": {
        "r_max": 6,
        "derivative_samples": 4,
    },
    "cli": {
        "batch_workers": 4,
    },
    "logging": {
        "level": "INFO",
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from parameters.yaml, falling back to defaults."""
    config_path = Path(path or os.getenv("FROBMOD_CONFIG") or CONFIG_PATH)
    if config_path.exists():
        try:
            with open(config_path, "r") as f:
                loaded = yaml.safe_load(f) or {}
            logger.debug(f"Loaded configuration from {config_path}")
            return _merge(DEFAULT_CONFIG, loaded)
        except yaml.YAMLError as e:
            logger.warning(f"Could not load config from {config_path}: {e}")
            logger.info("Using default configuration")
    else:
        logger.warning(f"Config file not found at {config_path}, using defaults")
    return copy.deepcopy(DEFAULT_CONFIG)


_active_config: Optional[Dict[str, Any]] = None


def active_config() -> Dict[str, Any]:
    """The configuration library defaults are read from; loaded from parameters.yaml on first use."""
    global _active_config
    if _active_config is None:
        _active_config = load_config()
    return _active_config


def use_config(config: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    """
    Install a configuration for library defaults

    Args:
        config: Merged configuration as returned by load_config, or None to
            reload parameters.yaml on next use

    Returns:
        The configuration that was active before the call
    """
    global _active_config
    previous = _active_config
    _active_config = config
    return previous


@contextmanager
def config_context(config: Dict[str, Any]):
    """Temporarily make ``config`` the active configuration."""
    previous = use_config(config)
    try:
        yield config
    finally:
        use_config(previous)


def setting(section: str, key: str) -> Any:
    """A single key from the active configuration; library signatures default to these."""
    return active_config()[section][key]

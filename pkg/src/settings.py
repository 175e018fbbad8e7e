"""
settings module: yaml defaults from config/defaults.yaml, overridden by environment variables.
"""
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv
from loguru import logger

load_dotenv()

CONFIG_PATH = Path(__file__).parent.parent / "config" / "defaults.yaml"

_BUILTIN: Dict[str, Any] = {
    "unfold_depth": 4,
    "unfold_width": 6,
    "iso_bound": 64,
    "describe_bound": 20,
    "eval_depth": 4,
    "rankwidth_max_n": 9,
    "seed": 0,
    "log_level": "INFO",
    "default_scheme_kind": "sbj",
}


@dataclass(frozen=True)
class Settings:
    unfold_depth: int
    unfold_width: int
    iso_bound: int
    describe_bound: int
    eval_depth: int
    rankwidth_max_n: int
    seed: int
    log_level: str
    default_scheme_kind: str


def _load_yaml(path: Path) -> Dict[str, Any]:
    """
    read the defaults file, flattening the `bounds` section.

    args:
        path: location of the yaml file

    returns:
        flat mapping of setting name to value, empty when the file is missing
    """
    try:
        with open(path, "r") as f:
            raw = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.warning(f"config file {path} not found, using built-in defaults")
        return {}
    flat = dict(raw.get("bounds", {}))
    flat.update({k: v for k, v in raw.items() if k != "bounds"})
    return flat


def load_settings(path: Path = CONFIG_PATH) -> Settings:
    values = dict(_BUILTIN)
    values.update(_load_yaml(path))
    for key, default in list(values.items()):
        env_value = os.getenv(f"JOINFOREST_{key.upper()}")
        if env_value is None:
            continue
        values[key] = int(env_value) if isinstance(_BUILTIN.get(key, default), int) else env_value
    logger.debug(f"settings loaded: {values}")
    return Settings(**{k: values[k] for k in _BUILTIN})


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()

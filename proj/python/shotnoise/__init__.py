"""Monte Carlo checks of shot-noise limit laws and their SINR network consequences."""

import json
from pathlib import Path

from ._shotnoise import (
    __version__,
    commands,
    frechet_scale,
    sample_one_sided_stable,
    stable_constant,
)
from . import _shotnoise

__all__ = [
    "__version__",
    "commands",
    "default_config",
    "normalize_config",
    "run",
    "stable_constant",
    "frechet_scale",
    "sample_one_sided_stable",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def default_config(command):
    return json.loads(_shotnoise.default_config(command))


def normalize_config(config, command=""):
    """Validate a config (dict or JSON text); raises ValueError on bad input."""
    return json.loads(_shotnoise.normalize_config(_text(config), command))


def run(config, out_dir, workers=0, seed=None):
    """Run a config and return (exit_code, summary dict, list of written paths)."""
    code, summary, files = _shotnoise.run(_text(config), Path(out_dir), workers, seed)
    return code, json.loads(summary), [Path(f) for f in files]

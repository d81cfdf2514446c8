"""Python access to the deskball engine plus the trainer-side file formats."""

import json
import os

from . import _core
from ._core import ConfigError, WeightsError, FEATURE_COUNT, RECEIVER_CLASSES, SCHEMA_VERSION, PASS_NETWORK_DIMS
from .io import read_dataset, write_weights, read_weights, forward

__all__ = [
    "ConfigError", "WeightsError", "FEATURE_COUNT", "RECEIVER_CLASSES", "SCHEMA_VERSION", "PASS_NETWORK_DIMS",
    "load_config", "baseline_config", "run_match", "run_tournament", "extract_dataset", "verify_weights",
    "verify_probe", "mlp_forward", "random_weights", "repair",
    "read_dataset", "write_weights", "read_weights", "forward",
]


def _config(spec):
    """A config given as a path or a dict, returned as JSON text and the directory relative paths resolve against."""
    if isinstance(spec, dict):
        return json.dumps(spec), os.getcwd()
    path = os.fspath(spec)
    return _core.load_config(path), os.path.dirname(os.path.abspath(path))


def load_config(path):
    return json.loads(_core.load_config(os.fspath(path)))


def baseline_config():
    return json.loads(_core.baseline_config())


def run_match(left, right, seed, max_cycles=6000, mirror=False):
    l, base = _config(left)
    r, _ = _config(right)
    # Paths inside a file config are already absolute after loading.
    return _core.run_match(l, r, base, seed, max_cycles, mirror)


def run_tournament(manifest):
    return _core.run_tournament(os.fspath(manifest))


def extract_dataset(config, opponents, matches, out_dir, base_seed=1, max_cycles=6000):
    c, base = _config(config)
    opps = [_config(o)[0] for o in opponents]
    return _core.extract_dataset(c, opps, base, matches, os.fspath(out_dir), base_seed, max_cycles)


def verify_weights(path):
    return _core.verify_weights(os.fspath(path))


def verify_probe(k):
    return _core.verify_probe(k)


def mlp_forward(weights_path, features):
    return _core.mlp_forward(os.fspath(weights_path), list(features))


def random_weights(path, seed=0):
    _core.random_weights(os.fspath(path), seed)


def repair(genes):
    return list(_core.repair(list(genes)))

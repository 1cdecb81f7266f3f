# backend/data_store.py
import json
import os
import sys

from . import config, logger
from .errors import ConfigError
from .channels import ChannelPreset, PresetRegistry


def line_of(text, key):
    """1-based line of the first `"key":` in a JSON text, or None."""
    if not text or not key:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return None


def read_text(path):
    """File contents; "-" reads stdin."""
    if path == "-":
        return sys.stdin.read()
    if not os.path.exists(path):
        raise ConfigError(f"file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def parse_json(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: invalid JSON ({e.msg})", line=e.lineno)


def load_presets(path=None):
    """
    Reads the EGG preset registry, a JSON array of
        {"label", "omega", "lambda", "a", "b", "c", "r", "provenance"}
    A missing default registry yields an empty registry.
    """
    path = path or config.PRESETS_FILE
    if path == config.PRESETS_FILE and not os.path.exists(path):
        logger.log(f"[data_store] preset registry {path} not found, continuing without presets")
        return PresetRegistry()
    text = read_text(path)
    data = parse_json(text, path)
    if not isinstance(data, list):
        raise ConfigError(f"{path}: preset registry must be a JSON array", line=1)
    presets = []
    for entry in data:
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: preset entries must be objects")
        try:
            presets.append(ChannelPreset.from_dict(entry))
        except ConfigError as e:
            raise ConfigError(str(e.args[0]), field=e.field, line=line_of(text, entry.get("label", "")))
    return PresetRegistry(presets)


def load_scenario_dict(path):
    """
    returns (raw dict, source text) of a scenario JSON file ("-" for stdin)
    """
    text = read_text(path)
    data = parse_json(text, path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: scenario must be a JSON object", line=1)
    return data, text


def write_text(path, text):
    """Writes to path, or stdout when path is None / "-"."""
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)

# import libs
from pathlib import Path
from typing import Any, Dict, Iterable, Union
import yaml
# local
from ..errors import ConfigError


def load_yaml_file(filepath: Union[str, Path]) -> Dict[str, Any]:
    """
    Safely load a YAML file and return its contents.

    Parameters
    ----------
    filepath : str or Path
        The path to the YAML file to be loaded.

    Returns
    -------
    dict
        The contents of the YAML file as a dictionary.
    """
    path = Path(filepath)
    if not path.is_file():
        raise ConfigError(f"YAML file not found: {filepath}")
    with path.open('r', encoding='utf-8') as f:
        try:
            content = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Error parsing YAML file: {filepath}\n{e}") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"{filepath}: top level must be a mapping")
    return content


def parse_assignments(
    lines: Iterable[str],
    source: str = "<overrides>"
) -> Dict[str, str]:
    """
    Parse ``key=value`` lines into a flat dictionary.

    Blank lines and lines starting with ``#`` are skipped. Later keys win.

    Parameters
    ----------
    lines : Iterable[str]
        Raw lines.
    source : str
        Name used in error messages.

    Returns
    -------
    dict
        Flat mapping of dotted keys to raw string values.
    """
    flat: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(
                f"{source}:{number}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{number}: empty key")
        flat[key] = value.strip()
    return flat


def load_config_file(filepath: Union[str, Path]) -> Dict[str, Any]:
    """
    Load a run configuration file as a nested dictionary.

    ``.yml``/``.yaml`` files go through PyYAML; anything else is read as a flat
    ``key=value`` file whose dotted keys address nested sections.

    Parameters
    ----------
    filepath : str or Path
        Path to the configuration file.

    Returns
    -------
    dict
        Nested configuration dictionary.
    """
    path = Path(filepath)
    if path.suffix.lower() in (".yml", ".yaml"):
        return load_yaml_file(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {filepath}")
    text = path.read_text(encoding="utf-8")
    return nest_keys(parse_assignments(text.splitlines(), source=str(path)))


def nest_keys(flat: Dict[str, Any]) -> Dict[str, Any]:
    """Turn ``{"model.d": "8"}`` into ``{"model": {"d": "8"}}``."""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"key {key!r} conflicts with scalar {part!r}")
            node = child
        if isinstance(node.get(parts[-1]), dict):
            raise ConfigError(f"key {key!r} conflicts with section")
        node[parts[-1]] = value
    return nested


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged

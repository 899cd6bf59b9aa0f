from .loader import (
    load_yaml_file,
    load_config_file,
    parse_assignments,
    nest_keys,
    merge_config
)
from .io import dumps_json, write_json, write_jsonl, read_json

__all__ = [
    "load_yaml_file",
    "load_config_file",
    "parse_assignments",
    "nest_keys",
    "merge_config",
    "dumps_json",
    "write_json",
    "write_jsonl",
    "read_json",
]

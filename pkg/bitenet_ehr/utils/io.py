# import libs
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Union
# local
from ..config import format_version

# NOTE: logger
logger = logging.getLogger(__name__)


def dumps_json(document: Any) -> str:
    """Serialize deterministically: sorted keys, fixed separators."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def write_json(path: Union[str, Path], document: dict) -> Path:
    """
    Write a single JSON document with a top-level ``version`` field.

    Parameters
    ----------
    path : str or Path
        Destination file.
    document : dict
        Payload; ``version`` is added when missing.

    Returns
    -------
    Path
        The written path.
    """
    path = Path(path)
    payload = {"version": format_version, **document}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload) + "\n", encoding="utf-8")
    logger.info(f"wrote {path}")
    return path


def write_jsonl(path: Union[str, Path], records: Iterable[dict]) -> Path:
    """Write one compact JSON object per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
            f.write("\n")
    logger.info(f"wrote {path}")
    return path


def read_json(path: Union[str, Path]) -> Any:
    """Read a JSON document."""
    with Path(path).open("r", encoding="utf-8") as f:
        return json.load(f)

# import libs
import logging
from pathlib import Path
from typing import Dict, Iterable, Union
# local
from .records import CategoryMap, PatientJourney
from ..errors import CategoryMapError

# NOTE: logger
logger = logging.getLogger(__name__)


def load_category_map(path: Union[str, Path]) -> CategoryMap:
    """
    Read a ``code<TAB>category`` file.

    Parameters
    ----------
    path : str or Path
        UTF-8 text file, one pair per line; blank lines and ``#`` comments are
        skipped.

    Returns
    -------
    CategoryMap
        The parsed map with categories in lexicographic order.

    Raises
    ------
    CategoryMapError
        Missing file, malformed line, or a code listed with two categories.
    """
    path = Path(path)
    if not path.is_file():
        raise CategoryMapError("category map not found", path=path)

    entries: Dict[str, str] = {}
    with path.open("r", encoding="utf-8") as f:
        for number, raw in enumerate(f, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise CategoryMapError(
                    "expected 'code<TAB>category'", path=path, line=number)
            code, category = parts[0].strip(), parts[1].strip()
            if code in entries and entries[code] != category:
                raise CategoryMapError(
                    f"code {code} mapped to both {entries[code]} and {category}",
                    path=path, line=number)
            entries[code] = category

    category_map = CategoryMap.from_entries(entries)
    logger.info(
        f"loaded {len(entries)} codes in {category_map.num_categories} categories from {path}")
    return category_map


def check_total(category_map: CategoryMap, journeys: Iterable[PatientJourney]) -> None:
    """Raise ``CategoryMapError`` naming the first unmapped diagnosis codes."""
    missing = category_map.unmapped(journeys)
    if missing:
        shown = ", ".join(missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise CategoryMapError(f"unmapped diagnosis codes: {shown}{more}")

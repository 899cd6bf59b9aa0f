# import libs
import logging
from collections import Counter
from typing import Iterable, List, Tuple
# local
from .records import PatientJourney, Visit, Vocabulary
from ..config import dx_prefix, default_min_visits, default_min_code_freq
from ..errors import PreprocessError, ConfigError

# NOTE: logger
logger = logging.getLogger(__name__)


def apply_dataset_mode(journeys: Iterable[PatientJourney], mode: str) -> List[PatientJourney]:
    """
    Restrict codes to the dataset mode.

    ``dx`` keeps diagnosis codes only, ``dxtx`` keeps everything. Visits left
    without codes are dropped.
    """
    if mode == "dxtx":
        return list(journeys)
    if mode != "dx":
        raise ConfigError(f"unknown dataset mode: {mode!r}")

    out: List[PatientJourney] = []
    for journey in journeys:
        visits = []
        for visit in journey.visits:
            codes = visit.dx_codes
            if codes:
                visits.append(visit.model_copy(update={"codes": codes}))
        out.append(journey.model_copy(update={"visits": tuple(visits)}))
    return out


def code_frequencies(journeys: Iterable[PatientJourney]) -> Counter:
    """Number of visits each code appears in."""
    counts: Counter = Counter()
    for journey in journeys:
        for visit in journey.visits:
            counts.update(visit.codes)
    return counts


def build_vocabulary(journeys: Iterable[PatientJourney]) -> Vocabulary:
    """Vocabulary over every code present, in lexicographic order."""
    codes = sorted({c for j in journeys for v in j.visits for c in v.codes})
    return Vocabulary(codes=tuple(codes))


def _filter_codes(journeys: List[PatientJourney], min_code_freq: int) -> List[PatientJourney]:
    counts = code_frequencies(journeys)
    kept_codes = {code for code, n in counts.items() if n >= min_code_freq}
    filtered: List[PatientJourney] = []
    for journey in journeys:
        visits: List[Visit] = []
        for visit in journey.visits:
            codes = tuple(c for c in visit.codes if c in kept_codes)
            if not codes:
                continue
            if len(codes) != len(visit.codes):
                visit = visit.model_copy(update={"codes": codes})
            visits.append(visit)
        filtered.append(journey.model_copy(update={"visits": tuple(visits)}))
    return filtered


def _occurrences(journeys: List[PatientJourney]) -> int:
    return sum(len(v.codes) for j in journeys for v in j.visits)


def preprocess(
    journeys: List[PatientJourney],
    min_visits: int = default_min_visits,
    min_code_freq: int = default_min_code_freq
) -> Tuple[List[PatientJourney], Vocabulary]:
    """
    Drop rare codes, then short journeys, and build the vocabulary.

    Each round runs the code-frequency filter and then the minimum-visit
    filter. Dropping patients lowers code counts, so rounds repeat until one
    removes nothing; the output is therefore stable under a second call.

    Parameters
    ----------
    journeys : list of PatientJourney
        Ingested journeys.
    min_visits : int
        Patients with fewer surviving visits are dropped.
    min_code_freq : int
        Codes appearing in fewer visits corpus-wide are removed.

    Returns
    -------
    tuple
        Surviving journeys and the vocabulary over their codes.

    Raises
    ------
    PreprocessError
        Nothing survives the thresholds.
    """
    total_codes = len(code_frequencies(journeys))
    survivors = list(journeys)
    rounds = 0
    while True:
        rounds += 1
        filtered = _filter_codes(survivors, min_code_freq)
        kept = [j for j in filtered if len(j.visits) >= min_visits]
        # filters only remove, so an unchanged count means nothing was removed
        unchanged = len(kept) == len(survivors) and _occurrences(kept) == _occurrences(survivors)
        survivors = kept
        if unchanged or not survivors:
            break

    if not survivors:
        raise PreprocessError(
            f"no patients left after preprocessing (min_visits={min_visits}, "
            f"min_code_freq={min_code_freq}); thresholds are too aggressive")

    vocab = build_vocabulary(survivors)
    logger.info(
        f"preprocess kept {len(survivors)}/{len(journeys)} patients and "
        f"{vocab.num_codes}/{total_codes} codes after {rounds} round(s)")
    return survivors, vocab


def diagnosis_codes(vocab: Vocabulary) -> List[str]:
    return [c for c in vocab.codes if c.startswith(dx_prefix)]

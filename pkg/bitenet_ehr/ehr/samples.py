# import libs
import logging
from typing import Iterable, List
# local
from .records import CategoryMap, IntervalVector, LabeledSample, PatientJourney
from ..config import default_window_days
from ..errors import CategoryMapError

# NOTE: logger
logger = logging.getLogger(__name__)


def compute_intervals(journey: PatientJourney) -> IntervalVector:
    """Days between each admission and the first admission."""
    if not journey.visits:
        return IntervalVector(days=())
    first = journey.visits[0].admission_day
    return IntervalVector(days=tuple(v.admission_day - first for v in journey.visits))


def make_readmission_samples(
    journeys: Iterable[PatientJourney],
    window_days: int = default_window_days
) -> List[LabeledSample]:
    """
    One sample per non-final visit.

    The label is 1 when the next admission falls within ``window_days`` of the
    indexed visit's discharge (inclusive).
    """
    samples: List[LabeledSample] = []
    for journey in journeys:
        visits = journey.visits
        for t in range(len(visits) - 1):
            gap = visits[t + 1].admission_day - visits[t].discharge_day
            samples.append(LabeledSample(
                journey_prefix=journey.prefix(t + 1),
                readm_label=1 if gap <= window_days else 0,
            ))
    logger.info(f"built {len(samples)} readmission samples")
    return samples


def make_diagnosis_samples(
    journeys: Iterable[PatientJourney],
    category_map: CategoryMap
) -> List[LabeledSample]:
    """
    One sample per non-final visit, labelled with the categories of the next
    visit's diagnosis codes.

    Target visits without any diagnosis code (procedures only) yield no
    sample.

    Raises
    ------
    CategoryMapError
        A target diagnosis code has no category.
    """
    samples: List[LabeledSample] = []
    skipped = 0
    for journey in journeys:
        visits = journey.visits
        for t in range(len(visits) - 1):
            target = visits[t + 1].dx_codes
            labels = set()
            for code in target:
                if code not in category_map.entries:
                    raise CategoryMapError(
                        f"unmapped diagnosis code {code} in patient {journey.patient_id}")
                labels.add(category_map.category_id(code))
            if not labels:
                skipped += 1
                continue
            samples.append(LabeledSample(
                journey_prefix=journey.prefix(t + 1),
                dx_labels=frozenset(labels),
            ))
    if skipped:
        logger.warning(f"skipped {skipped} diagnosis targets without diagnosis codes")
    logger.info(f"built {len(samples)} diagnosis samples")
    return samples

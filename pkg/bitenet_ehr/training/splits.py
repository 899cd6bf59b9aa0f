# import libs
import logging
from typing import List, Sequence, Tuple
import numpy as np
# local
from ..ehr import LabeledSample
from ..errors import PreprocessError

# NOTE: logger
logger = logging.getLogger(__name__)


def split_counts(num_patients: int, ratios: Sequence[float]) -> Tuple[int, int, int]:
    """Patients per split; every split gets at least one patient."""
    if num_patients < 3:
        raise PreprocessError(f"need at least 3 patients to split, got {num_patients}")
    n_valid = max(1, int(round(ratios[1] * num_patients)))
    n_test = max(1, int(round(ratios[2] * num_patients)))
    n_train = num_patients - n_valid - n_test
    while n_train < 1:
        if n_valid >= n_test and n_valid > 1:
            n_valid -= 1
        else:
            n_test -= 1
        n_train += 1
    return n_train, n_valid, n_test


def split(
    samples: Sequence[LabeledSample],
    ratios: Sequence[float],
    seed: int
) -> Tuple[List[LabeledSample], List[LabeledSample], List[LabeledSample]]:
    """
    Split samples at the patient level.

    Patient ids are sorted, shuffled with ``default_rng(seed)`` and cut by
    ``ratios``; every sample follows its patient. Samples keep their input
    order inside each split.

    Raises
    ------
    PreprocessError
        Fewer than 3 distinct patients.
    """
    patients = sorted({s.patient_id for s in samples})
    n_train, n_valid, _ = split_counts(len(patients), ratios)
    order = np.random.default_rng(seed).permutation(len(patients))
    shuffled = [patients[i] for i in order]
    train_ids = set(shuffled[:n_train])
    valid_ids = set(shuffled[n_train:n_train + n_valid])

    train, valid, test = [], [], []
    for sample in samples:
        if sample.patient_id in train_ids:
            train.append(sample)
        elif sample.patient_id in valid_ids:
            valid.append(sample)
        else:
            test.append(sample)
    logger.info(
        f"split {len(patients)} patients into {n_train}/{n_valid}/{len(patients) - n_train - n_valid} "
        f"({len(train)}/{len(valid)}/{len(test)} samples)")
    return train, valid, test

# import libs
from typing import List, Optional, Sequence
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from .records import LabeledSample, Vocabulary
from .samples import compute_intervals
from ..config import PAD_ID


class PaddedBatch(BaseModel):
    """
    Dense, padded view of a list of samples.

    Shapes: ``codes``/``code_mask`` are ``[B, m, k]``, ``visit_mask``/``intervals``
    are ``[B, m]``, ``readm_labels`` is ``[B]`` and ``dx_targets`` is ``[B, C]``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    codes: np.ndarray
    code_mask: np.ndarray
    visit_mask: np.ndarray
    intervals: np.ndarray
    patient_ids: List[str]
    readm_labels: Optional[np.ndarray] = None
    dx_targets: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return int(self.codes.shape[0])

    @property
    def lengths(self) -> np.ndarray:
        """Real visit count per sample."""
        return self.visit_mask.sum(axis=1)


def pad_samples(
    samples: Sequence[LabeledSample],
    vocab: Vocabulary,
    num_categories: Optional[int] = None,
    min_visits: int = 0,
    min_codes: int = 0
) -> PaddedBatch:
    """
    Pad ``samples`` into one batch, keeping their order.

    Parameters
    ----------
    samples : sequence of LabeledSample
        Samples to pad.
    vocab : Vocabulary
        Maps code strings to ids.
    num_categories : int, optional
        Width of the multi-hot diagnosis target.
    min_visits, min_codes : int
        Pad to at least these extents even when the batch maximum is smaller.
    """
    m = max([len(s.journey_prefix.visits) for s in samples] + [min_visits, 1])
    k = max([len(v.codes) for s in samples for v in s.journey_prefix.visits] + [min_codes, 1])
    B = len(samples)

    codes = np.full((B, m, k), PAD_ID, dtype=np.int64)
    code_mask = np.zeros((B, m, k), dtype=bool)
    visit_mask = np.zeros((B, m), dtype=bool)
    intervals = np.zeros((B, m), dtype=np.int64)

    for b, sample in enumerate(samples):
        journey = sample.journey_prefix
        days = compute_intervals(journey).days
        for i, visit in enumerate(journey.visits):
            ids = vocab.encode(visit.codes)
            codes[b, i, :len(ids)] = ids
            code_mask[b, i, :len(ids)] = True
            visit_mask[b, i] = True
            intervals[b, i] = days[i]

    readm = None
    if all(s.readm_label is not None for s in samples):
        readm = np.array([s.readm_label for s in samples], dtype=np.float64)

    dx = None
    if num_categories is not None and all(s.dx_labels is not None for s in samples):
        dx = np.zeros((B, num_categories), dtype=np.float64)
        for b, sample in enumerate(samples):
            dx[b, sorted(sample.dx_labels)] = 1.0

    return PaddedBatch(
        codes=codes,
        code_mask=code_mask,
        visit_mask=visit_mask,
        intervals=intervals,
        patient_ids=[s.patient_id for s in samples],
        readm_labels=readm,
        dx_targets=dx,
    )


def batch(
    samples: Sequence[LabeledSample],
    vocab: Vocabulary,
    batch_size: int,
    shuffle_seed: Optional[int],
    num_categories: Optional[int] = None
) -> List[PaddedBatch]:
    """
    Shuffle with a seeded generator and cut into padded batches.

    ``shuffle_seed=None`` keeps the input order.

    Raises
    ------
    ValueError
        ``batch_size < 1`` or no samples.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if not samples:
        raise ValueError("cannot batch an empty sample list")

    order = np.arange(len(samples))
    if shuffle_seed is not None:
        order = np.random.default_rng(shuffle_seed).permutation(len(samples))

    return [
        pad_samples([samples[i] for i in order[start:start + batch_size]], vocab, num_categories)
        for start in range(0, len(samples), batch_size)
    ]

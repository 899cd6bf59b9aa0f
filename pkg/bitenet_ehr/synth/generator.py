# import libs
import json
import logging
from datetime import date, timedelta
from pathlib import Path
from typing import List, Tuple, Union
import numpy as np
from pydantic import BaseModel
# local
from .truth import PlantedTruth, within_cluster_pairs
from ..config import date_format, dx_prefix, px_prefix
from ..models import SynthConfig
from ..utils import write_json

# NOTE: logger
logger = logging.getLogger(__name__)

# first admission day 0 maps to this calendar date
calendar_origin = date(2010, 1, 1)
max_stay_days = 7
readmit_gap = (1, 30)
late_gap = (31, 180)

JOURNEYS_FILE = "journeys.jsonl"
CATEGORIES_FILE = "categories.tsv"
TRUTH_FILE = "truth.json"


class SynthFiles(BaseModel):
    journeys: Path
    categories: Path
    truth: Path


class _Structure(BaseModel):
    dx_codes: List[str]
    px_codes: List[str]
    triggers: List[str]
    clusters: List[List[str]]
    cluster_categories: List[str]


def _names(prefix: str, stem: str, n: int) -> List[str]:
    width = len(str(n))
    return [f"{prefix}{stem}{i:0{width}d}" for i in range(1, n + 1)]


def _structure(config: SynthConfig) -> _Structure:
    rng = np.random.default_rng([config.seed, 0])
    dx_codes = _names(dx_prefix, "D", config.vocab_dx)
    px_codes = _names(px_prefix, "P", config.vocab_px)
    categories = [f"C{g:0{len(str(config.num_categories))}d}" for g in range(config.num_categories)]

    triggers = sorted(dx_codes[i] for i in rng.permutation(config.vocab_dx)[:config.trigger_codes])
    order = rng.permutation(config.vocab_dx)
    K = config.cluster_count
    clusters = [sorted(dx_codes[i] for i in order[c::K]) for c in range(K)]
    return _Structure(
        dx_codes=dx_codes,
        px_codes=px_codes,
        triggers=triggers,
        clusters=clusters,
        cluster_categories=[categories[c % config.num_categories] for c in range(K)],
    )


def _day(offset: int) -> str:
    return (calendar_origin + timedelta(days=int(offset))).strftime(date_format)


def _patient(config: SynthConfig, s: _Structure, index: int) -> dict:
    rng = np.random.default_rng([config.seed, 1, index])
    K = config.cluster_count
    triggers = set(s.triggers)

    n_visits = int(rng.integers(config.visits_min, config.visits_max + 1))
    first_day = int(rng.integers(0, config.span_days))
    day = first_day
    primary = int(rng.integers(K))

    visits = []
    for t in range(n_visits):
        if t > 0:
            if rng.random() < config.transition_strength:
                primary = (primary + 1) % K
            else:
                primary = int(rng.integers(K))

        codes = set()
        members = s.clusters[primary]
        for _ in range(int(rng.integers(config.codes_min, config.codes_max + 1))):
            if rng.random() < config.cluster_affinity:
                codes.add(members[int(rng.integers(len(members)))])
            else:
                codes.add(s.dx_codes[int(rng.integers(config.vocab_dx))])
        if rng.random() < config.trigger_rate:
            codes.add(s.triggers[int(rng.integers(len(s.triggers)))])
        n_px = int(rng.integers(0, config.procedures_max + 1))
        if n_px:
            codes.update(s.px_codes[i] for i in rng.choice(config.vocab_px, n_px, replace=False))

        discharge = day + int(rng.integers(0, max_stay_days + 1))
        visits.append({
            "admission_date": _day(day),
            "discharge_date": _day(discharge),
            "codes": sorted(codes),
        })

        if t < n_visits - 1:
            active = bool(triggers & codes)
            if config.interval_effect:
                active = active and day - first_day >= config.interval_threshold_days
            rate = config.trigger_readm_rate if active else config.readm_base_rate
            low, high = readmit_gap if rng.random() < rate else late_gap
            day = discharge + int(rng.integers(low, high + 1))

    width = len(str(config.num_patients))
    return {"patient_id": f"P{index:0{width}d}", "visits": visits}


def generate(config: SynthConfig, out_dir: Union[str, Path]) -> SynthFiles:
    """
    Write a synthetic cohort with planted structure.

    Diagnosis codes are partitioned into clusters that share one category and
    co-occur within visits; each visit's primary cluster follows
    ``next(c) = (c + 1) mod K`` with probability ``transition_strength``. A
    trigger code in a visit makes a readmission within 30 days likely, from
    ``interval_threshold_days`` after the first visit on when
    ``interval_effect`` is set.

    Parameters
    ----------
    config : SynthConfig
        Generator parameters; patient ``i`` draws from ``default_rng([seed, 1, i])``.
    out_dir : str or Path
        Created when missing.

    Returns
    -------
    SynthFiles
        Paths of the journey, category map and truth files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    s = _structure(config)

    files = SynthFiles(
        journeys=out_dir / JOURNEYS_FILE,
        categories=out_dir / CATEGORIES_FILE,
        truth=out_dir / TRUTH_FILE,
    )

    with files.journeys.open("w", encoding="utf-8", newline="\n") as f:
        for i in range(config.num_patients):
            record = _patient(config, s, i)
            f.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
            f.write("\n")

    # procedures carry no planted signal; they rotate through the categories
    used = sorted(set(s.cluster_categories))
    category_lines: List[Tuple[str, str]] = sorted(
        [(code, s.cluster_categories[c]) for c, members in enumerate(s.clusters) for code in members]
        + [(code, used[j % len(used)]) for j, code in enumerate(s.px_codes)])
    with files.categories.open("w", encoding="utf-8", newline="\n") as f:
        f.write("# code\tcategory\n")
        for code, category in category_lines:
            f.write(f"{code}\t{category}\n")

    truth = PlantedTruth(
        seed=config.seed,
        trigger_codes=s.triggers,
        clusters=s.clusters,
        cluster_categories=s.cluster_categories,
        pairs=within_cluster_pairs(s.clusters),
        cluster_affinity=config.cluster_affinity,
        transition_strength=config.transition_strength,
        trigger_rate=config.trigger_rate,
        trigger_readm_rate=config.trigger_readm_rate,
        readm_base_rate=config.readm_base_rate,
        interval_effect=config.interval_effect,
        interval_threshold_days=config.interval_threshold_days,
    )
    write_json(files.truth, truth.model_dump(mode="json"))

    logger.info(
        f"synthesised {config.num_patients} patients, {config.vocab_dx} dx / "
        f"{config.vocab_px} px codes in {config.cluster_count} clusters -> {out_dir}")
    return files

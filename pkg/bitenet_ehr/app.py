# import libs
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from .config import __version__, get_config
from .ehr import (
    CategoryMap,
    LabeledSample,
    PatientJourney,
    Vocabulary,
    apply_dataset_mode,
    check_total,
    ingest_journeys,
    load_category_map,
    pad_samples,
    preprocess
)
from .errors import BiteNetError, ConfigError, OutputExistsError, UnknownPatientError
from .metrics import (
    aggregate_reports,
    evaluate,
    evaluate_embeddings,
    extract_code_embeddings,
    write_embeddings
)
from .models import (
    AggregateReport,
    CodeImportance,
    MetricReport,
    PatientExplanation,
    RunConfig,
    VisitExplanation
)
from .network import BiteNet, load_params, save_params
from .synth import SynthFiles, generate, planted_pairs, JOURNEYS_FILE, CATEGORIES_FILE, TRUTH_FILE
from .training import SplitDataset, build_dataset, train
from .utils import write_json

# NOTE: logger
logger = logging.getLogger(__name__)

# NOTE: output file names
PARAMS_FILE = "params.bin"
TRAIN_LOG_FILE = "train_log.jsonl"
METRICS_FILE = "metrics.json"
EVALUATION_FILE = "evaluation.json"
EMBEDDINGS_FILE = "embeddings.tsv"
EXPLANATIONS_FILE = "explanations.json"


class LoadedData(BaseModel):
    """Preprocessed journeys with their vocabulary and optional category map."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    journeys: List[PatientJourney]
    vocab: Vocabulary
    category_map: Optional[CategoryMap] = None


class TrainOutcome(BaseModel):
    """Files and metrics produced by ``cmd_train``."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: List[Path]
    logs: List[Path]
    metrics: Path
    reports: List[MetricReport]
    aggregate: Optional[AggregateReport] = None


# SECTION: helpers
def output_dir(config: RunConfig) -> Path:
    return Path(config.paths.output_dir or get_config().output_dir)


def guard_outputs(paths: Sequence[Path], force: bool) -> None:
    """Refuse to overwrite existing outputs unless ``force`` is set."""
    existing = [str(p) for p in paths if Path(p).exists()]
    if existing and not force:
        raise OutputExistsError(
            f"refusing to overwrite {', '.join(existing)}; pass --force to replace")


def load_data(config: RunConfig, task: Optional[str] = None) -> LoadedData:
    """
    Ingest, filter and preprocess the configured journey file.

    The category map is loaded when configured and is mandatory for the
    diagnosis task.
    """
    task = task or config.model.task
    if config.paths.journeys is None:
        raise ConfigError("paths.journeys is not set")
    if task == "diagnosis" and config.paths.categories is None:
        raise ConfigError("task=diagnosis requires paths.categories (a category map)")

    journeys = ingest_journeys(config.paths.journeys)
    journeys = apply_dataset_mode(journeys, config.data.mode)
    journeys, vocab = preprocess(journeys, config.data.min_visits, config.data.min_code_freq)

    category_map = None
    if config.paths.categories is not None:
        category_map = load_category_map(config.paths.categories)
        if task == "diagnosis":
            check_total(category_map, journeys)
    return LoadedData(journeys=journeys, vocab=vocab, category_map=category_map)


def split_dataset(config: RunConfig, data: LoadedData, task: str) -> SplitDataset:
    # NOTE: the split always follows train.seed so every seed sees the same test set
    return build_dataset(
        data.journeys,
        data.vocab,
        task,
        config.train.split_ratios,
        config.train.seed,
        window_days=config.data.window_days,
        category_map=data.category_map if task == "diagnosis" else None,
    )


def load_model(config: RunConfig, data: LoadedData) -> BiteNet:
    path = config.paths.params or output_dir(config) / PARAMS_FILE
    return load_params(path, expected_vocab_hash=data.vocab.content_hash())


def _manifest(config: RunConfig, command: str) -> Dict:
    return {"version": __version__, "command": command, "config": config.model_dump(mode="json")}


# SECTION: commands
def cmd_synth(config: RunConfig) -> SynthFiles:
    """
    Generate a synthetic cohort into the output directory.

    Returns
    -------
    SynthFiles
        Journey, category map and truth file paths.
    """
    try:
        out = output_dir(config)
        guard_outputs([out / JOURNEYS_FILE, out / CATEGORIES_FILE, out / TRUTH_FILE], config.force)
        return generate(config.synth, out)
    except BiteNetError as e:
        logger.error(f"synth failed: {e}")
        raise


def cmd_train(config: RunConfig) -> TrainOutcome:
    """
    Preprocess, split, train and evaluate once per seed.

    A single seed writes ``params.bin`` and ``train_log.jsonl`` to the output
    directory; several seeds write them under ``seed-<n>/``. ``metrics.json``
    holds the test report, or mean and std per metric across seeds.
    """
    try:
        out = output_dir(config)
        seeds = config.run_seeds
        per_seed_dirs = [out if len(seeds) == 1 else out / f"seed-{s}" for s in seeds]
        guard_outputs(
            [d / PARAMS_FILE for d in per_seed_dirs] + [out / METRICS_FILE], config.force)

        data = load_data(config)
        dataset = split_dataset(config, data, config.model.task)

        params_paths, log_paths, reports = [], [], []
        for seed, run_dir in zip(seeds, per_seed_dirs):
            logger.info(f"training seed {seed}")
            train_config = config.train.model_copy(update={"seed": seed})
            result = train(
                dataset, config.model, train_config, log_path=run_dir / TRAIN_LOG_FILE)
            params_paths.append(save_params(result.model, run_dir / PARAMS_FILE))
            log_paths.append(run_dir / TRAIN_LOG_FILE)
            reports.append(evaluate(
                result.model, dataset.test, dataset.vocab, config.train.batch_size))

        document = _manifest(config, "train")
        document["seeds"] = seeds
        aggregate = None
        if len(reports) == 1:
            document["report"] = reports[0].model_dump(mode="json")
        else:
            aggregate = aggregate_reports(reports, seeds)
            document["aggregate"] = aggregate.model_dump(mode="json")
        metrics_path = write_json(out / METRICS_FILE, document)

        return TrainOutcome(
            params=params_paths,
            logs=log_paths,
            metrics=metrics_path,
            reports=reports,
            aggregate=aggregate,
        )
    except BiteNetError as e:
        logger.error(f"train failed: {e}")
        raise


def cmd_evaluate(config: RunConfig) -> MetricReport:
    """
    Score a parameter file on the test split; with ``paths.truth`` also NNS
    accuracy@k and k-means NMI over the diagnosis code embeddings.
    """
    try:
        out = output_dir(config)
        guard_outputs([out / EVALUATION_FILE], config.force)

        # NOTE: the parameter file decides the task
        params_path = config.paths.params or out / PARAMS_FILE
        task = load_params(params_path).config.task
        data = load_data(config, task)
        model = load_model(config, data)
        dataset = split_dataset(config, data, task)

        report = evaluate(model, dataset.test, dataset.vocab, config.train.batch_size)
        if config.paths.truth is not None:
            pairs, labels = planted_pairs(config.paths.truth)
            embeddings = extract_code_embeddings(model.params, data.vocab)
            nns, nmi_value = evaluate_embeddings(
                embeddings, pairs, labels, config.train.seed, metric=config.nns_metric)
            report = report.model_copy(update={"nns_accuracy_at_k": nns, "nmi": nmi_value})

        document = _manifest(config, "evaluate")
        document["report"] = report.model_dump(mode="json")
        write_json(out / EVALUATION_FILE, document)
        return report
    except BiteNetError as e:
        logger.error(f"evaluate failed: {e}")
        raise


def cmd_embed(config: RunConfig) -> Path:
    """Export the trained code embeddings, codes sorted lexicographically."""
    try:
        out = output_dir(config)
        target = out / EMBEDDINGS_FILE
        guard_outputs([target], config.force)

        data = load_data(config, task="readmission")
        model = load_model(config, data)
        return write_embeddings(target, extract_code_embeddings(model.params, data.vocab))
    except BiteNetError as e:
        logger.error(f"embed failed: {e}")
        raise


def explain_journey(model: BiteNet, vocab: Vocabulary, journey: PatientJourney) -> PatientExplanation:
    """
    Attention-based importance for one whole journey.

    Visit importance is the mean of the forward and backward pooling weights;
    code importance is the code-level pooling weight inside each visit.
    """
    sample = LabeledSample(journey_prefix=journey)
    padded = pad_samples([sample], vocab, model.config.num_categories)
    trace = model.predict(padded)

    visits: List[VisitExplanation] = []
    for i, visit in enumerate(journey.visits):
        ids = padded.codes[0, i][padded.code_mask[0, i]]
        weights = trace.code_weights[0, i][padded.code_mask[0, i]]
        fw = float(trace.visit_weights_fw[0, i])
        bw = float(trace.visit_weights_bw[0, i])
        visits.append(VisitExplanation(
            index=i,
            admission_day=visit.admission_day,
            importance=(fw + bw) / 2.0,
            importance_fw=fw,
            importance_bw=bw,
            codes=[
                CodeImportance(code=code, weight=float(w))
                for code, w in zip(vocab.decode(ids.tolist()), weights)
            ],
        ))
    return PatientExplanation(
        patient_id=journey.patient_id,
        task=model.config.task,
        probabilities=[float(p) for p in np.asarray(trace.probabilities[0]).reshape(-1)],
        visits=visits,
    )


def cmd_explain(config: RunConfig) -> Tuple[Path, List[PatientExplanation]]:
    """Write per-visit and per-code attention importance for ``config.patients``."""
    try:
        out = output_dir(config)
        target = out / EXPLANATIONS_FILE
        guard_outputs([target], config.force)
        if not config.patients:
            raise ConfigError("no patients selected; set patients=<id>[,<id>...]")

        params_path = config.paths.params or out / PARAMS_FILE
        task = load_params(params_path).config.task
        data = load_data(config, task)
        model = load_model(config, data)

        by_id = {j.patient_id: j for j in data.journeys}
        explanations = []
        for patient_id in config.patients:
            if patient_id not in by_id:
                raise UnknownPatientError(
                    f"patient '{patient_id}' is not in {config.paths.journeys} after preprocessing")
            explanations.append(explain_journey(model, data.vocab, by_id[patient_id]))

        document = _manifest(config, "explain")
        document["patients"] = [e.model_dump(mode="json") for e in explanations]
        return write_json(target, document), explanations
    except BiteNetError as e:
        logger.error(f"explain failed: {e}")
        raise

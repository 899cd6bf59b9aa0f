# import libs
import pytest
# local
from bitenet_ehr.ehr import (
    CategoryMap,
    LabeledSample,
    Visit,
    Vocabulary,
    apply_dataset_mode,
    batch,
    build_vocabulary,
    check_total,
    code_frequencies,
    compute_intervals,
    ingest_journeys,
    load_category_map,
    make_diagnosis_samples,
    make_readmission_samples,
    pad_samples,
    preprocess
)
from bitenet_ehr.errors import CategoryMapError, IngestionError, PreprocessError
from conftest import make_journey, write_journey_file


# SECTION: records
def test_visit_codes_are_a_sorted_set():
    visit = Visit(codes=("dx:b", "dx:a", "dx:b"), admission_day=0, discharge_day=1)
    assert visit.codes == ("dx:a", "dx:b")


def test_visit_rejects_empty_codes_and_reversed_days():
    with pytest.raises(ValueError):
        Visit(codes=(), admission_day=0, discharge_day=0)
    with pytest.raises(ValueError):
        Visit(codes=("dx:a",), admission_day=3, discharge_day=2)


def test_vocabulary_reserves_padding_id():
    vocab = Vocabulary(codes=("dx:a", "dx:b", "px:x"))
    assert vocab.size == 4
    assert vocab.num_codes == 3
    assert vocab.encode(["px:x", "dx:a"]) == [1, 3]
    assert vocab.decode([0, 2, 3]) == ["dx:b", "px:x"]
    assert vocab.content_hash() == Vocabulary(codes=("dx:a", "dx:b", "px:x")).content_hash()
    assert vocab.content_hash() != Vocabulary(codes=("dx:a", "dx:b")).content_hash()


# SECTION: ingestion
def test_ingest_converts_dates_to_day_indices(tmp_path):
    path = write_journey_file(tmp_path / "j.jsonl", [
        {"patient_id": "p1", "visits": [
            {"admission_date": "2020-01-11", "discharge_date": "2020-01-12", "codes": ["dx:b"]},
            {"admission_date": "2020-01-01", "discharge_date": "2020-01-03", "codes": ["dx:a", "px:x"]},
        ]},
        {"patient_id": "p2", "visits": [
            {"admission_date": "2020-02-01", "discharge_date": "2020-02-01", "codes": ["dx:a"]},
        ]},
    ])
    journeys = ingest_journeys(path)
    assert [j.patient_id for j in journeys] == ["p1", "p2"]
    assert [v.admission_day for v in journeys[0].visits] == [0, 10]
    assert journeys[0].visits[0].discharge_day == 2
    assert journeys[1].visits[0].admission_day == 31


def test_ingest_reports_line_of_empty_visit(tmp_path):
    path = write_journey_file(tmp_path / "j.jsonl", [
        {"patient_id": "p1", "visits": [
            {"admission_date": "2020-01-01", "discharge_date": "2020-01-01", "codes": ["dx:a"]}]},
        {"patient_id": "p2", "visits": [
            {"admission_date": "2020-01-01", "discharge_date": "2020-01-01", "codes": []}]},
    ])
    with pytest.raises(IngestionError) as info:
        ingest_journeys(path)
    assert info.value.line == 2
    assert "visit with zero codes" in str(info.value)


def test_ingest_rejects_bad_date_and_namespace(tmp_path):
    bad_date = write_journey_file(tmp_path / "a.jsonl", [
        {"patient_id": "p1", "visits": [
            {"admission_date": "2020-13-01", "discharge_date": "2020-01-01", "codes": ["dx:a"]}]},
    ])
    with pytest.raises(IngestionError):
        ingest_journeys(bad_date)
    bad_code = write_journey_file(tmp_path / "b.jsonl", [
        {"patient_id": "p1", "visits": [
            {"admission_date": "2020-01-01", "discharge_date": "2020-01-01", "codes": ["a"]}]},
    ])
    with pytest.raises(IngestionError):
        ingest_journeys(bad_code)


def test_ingest_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    assert ingest_journeys(path) == []


# SECTION: preprocessing
def test_dataset_mode_dx_drops_procedures(tiny_journeys):
    dx_only = apply_dataset_mode(tiny_journeys, "dx")
    codes = {c for j in dx_only for v in j.visits for c in v.codes}
    assert all(c.startswith("dx:") for c in codes)
    assert apply_dataset_mode(tiny_journeys, "dxtx") == tiny_journeys


def test_dataset_mode_drops_visits_left_empty():
    journey = make_journey("p", [(["px:x"], 0, 0), (["dx:a"], 5, 5)])
    (filtered,) = apply_dataset_mode([journey], "dx")
    assert len(filtered.visits) == 1


def test_preprocess_filters_codes_then_patients(tiny_journeys):
    counts = code_frequencies(tiny_journeys)
    assert counts["dx:a"] == 4
    journeys, vocab = preprocess(tiny_journeys, min_visits=2, min_code_freq=3)
    kept = set(vocab.codes)
    assert kept == {c for c, n in counts.items() if n >= 3}
    assert all(len(j.visits) >= 2 for j in journeys)


def test_preprocess_raises_when_nothing_survives(tiny_journeys):
    with pytest.raises(PreprocessError):
        preprocess(tiny_journeys, min_visits=10, min_code_freq=1)


def test_preprocess_repeats_filters_until_stable():
    journeys = [
        make_journey("a", [(["dx:x", "dx:y"], 0, 1), (["dx:x", "dx:y"], 10, 11), (["dx:x"], 20, 21)]),
        make_journey("b", [(["dx:y", "dx:z"], 0, 1), (["dx:q"], 10, 11)]),
        make_journey("c", [(["dx:x"], 0, 1), (["dx:x"], 50, 51)]),
    ]
    # one round keeps dx:y (3 visits) and drops b, which leaves dx:y in 2 visits
    once, vocab = preprocess(journeys, min_visits=2, min_code_freq=3)
    assert vocab.codes == ("dx:x",)
    assert [j.patient_id for j in once] == ["a", "c"]
    assert [len(j.visits) for j in once] == [3, 2]

    twice, vocab2 = preprocess(once, min_visits=2, min_code_freq=3)
    assert once == twice
    assert vocab == vocab2


def test_vocabulary_is_lexicographic(tiny_journeys):
    assert build_vocabulary(tiny_journeys).codes == ("dx:a", "dx:b", "dx:c", "dx:d", "px:x")


# SECTION: samples
def test_intervals_start_at_zero(tiny_journeys):
    assert compute_intervals(tiny_journeys[2]).days == (0, 30, 35, 290)


def test_readmission_labels_use_inclusive_window():
    journey = make_journey("p", [(["dx:a"], 0, 10), (["dx:a"], 40, 41), (["dx:a"], 72, 72)])
    samples = make_readmission_samples([journey], window_days=30)
    assert [s.readm_label for s in samples] == [1, 0]
    assert [len(s.journey_prefix) for s in samples] == [1, 2]


def test_sample_count_is_visits_minus_one(tiny_journeys):
    samples = make_readmission_samples(tiny_journeys)
    assert len(samples) == sum(len(j.visits) - 1 for j in tiny_journeys)


def test_diagnosis_samples_use_next_visit_categories(tiny_journeys):
    category_map = CategoryMap.from_entries(
        {"dx:a": "A", "dx:b": "A", "dx:c": "C", "dx:d": "D"})
    samples = make_diagnosis_samples(tiny_journeys, category_map)
    assert len(samples) == 6
    # p1 visit 2 has dx:b -> category A (id 0)
    assert samples[0].dx_labels == frozenset({0})
    # p2 visit 2 has dx:c, dx:d -> C, D
    assert samples[2].dx_labels == frozenset({1, 2})


def test_diagnosis_samples_reject_unmapped_code(tiny_journeys):
    category_map = CategoryMap.from_entries({"dx:a": "A"})
    with pytest.raises(CategoryMapError):
        make_diagnosis_samples(tiny_journeys, category_map)


def test_diagnosis_samples_skip_procedure_only_targets():
    journey = make_journey("p1", [(["dx:a"], 0, 2), (["px:p"], 10, 11), (["dx:b", "px:p"], 40, 42)])
    category_map = CategoryMap.from_entries({"dx:a": "A", "dx:b": "B", "px:p": "A"})
    samples = make_diagnosis_samples([journey], category_map)
    assert len(samples) == 1
    assert len(samples[0].journey_prefix) == 2
    assert samples[0].dx_labels == frozenset({1})


# SECTION: category map
def test_load_category_map(tmp_path, tiny_journeys):
    path = tmp_path / "map.tsv"
    path.write_text("# header\n\ndx:a\tA\ndx:b\tA\ndx:c\tC\ndx:d\tD\n", encoding="utf-8")
    category_map = load_category_map(path)
    assert category_map.categories == ("A", "C", "D")
    assert category_map.category_id("dx:c") == 1
    check_total(category_map, tiny_journeys)


def test_category_map_conflict_and_gaps(tmp_path, tiny_journeys):
    path = tmp_path / "map.tsv"
    path.write_text("dx:a\tA\ndx:a\tB\n", encoding="utf-8")
    with pytest.raises(CategoryMapError) as info:
        load_category_map(path)
    assert info.value.line == 2

    partial = CategoryMap.from_entries({"dx:a": "A"})
    with pytest.raises(CategoryMapError):
        check_total(partial, tiny_journeys)


# SECTION: batching
def test_pad_samples_shapes_and_masks(tiny_samples, tiny_vocab):
    padded = pad_samples(tiny_samples, tiny_vocab)
    B = len(tiny_samples)
    assert padded.codes.shape == (B, 3, 2)
    assert padded.visit_mask.sum() == sum(len(s.journey_prefix) for s in tiny_samples)
    assert (padded.codes[~padded.code_mask] == 0).all()
    assert padded.readm_labels.shape == (B,)
    assert padded.intervals[-1].tolist() == [0, 30, 35]


def test_pad_samples_honours_minimum_extents(tiny_samples, tiny_vocab):
    padded = pad_samples(tiny_samples[:1], tiny_vocab, min_visits=4, min_codes=3)
    assert padded.codes.shape == (1, 4, 3)


def test_batch_is_seeded(tiny_samples, tiny_vocab):
    first = batch(tiny_samples, tiny_vocab, 2, shuffle_seed=3)
    second = batch(tiny_samples, tiny_vocab, 2, shuffle_seed=3)
    assert [b.patient_ids for b in first] == [b.patient_ids for b in second]
    assert sum(b.size for b in first) == len(tiny_samples)
    in_order = batch(tiny_samples, tiny_vocab, 10, shuffle_seed=None)
    assert in_order[0].patient_ids == [s.patient_id for s in tiny_samples]


def test_batch_rejects_bad_size(tiny_samples, tiny_vocab):
    with pytest.raises(ValueError):
        batch(tiny_samples, tiny_vocab, 0, shuffle_seed=None)
    with pytest.raises(ValueError):
        batch([], tiny_vocab, 2, shuffle_seed=None)


def test_labeled_sample_requires_non_empty_dx_labels(tiny_journeys):
    with pytest.raises(ValueError):
        LabeledSample(journey_prefix=tiny_journeys[0], dx_labels=frozenset())

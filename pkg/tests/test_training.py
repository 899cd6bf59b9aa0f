# import libs
import json
import numpy as np
import pytest
# local
from bitenet_ehr.ehr import (
    CategoryMap,
    build_vocabulary,
    ingest_journeys,
    load_category_map,
    make_readmission_samples,
    pad_samples,
    preprocess
)
from bitenet_ehr.errors import ConfigError, DivergenceError, PreprocessError, ShapeError
from bitenet_ehr.models import ModelConfig, TrainConfig
from bitenet_ehr.network import init_params
from bitenet_ehr.nn import LayerNormParams, Tensor
from bitenet_ehr.synth import generate
from bitenet_ehr.training import (
    RMSprop,
    RMSpropState,
    bce_loss,
    build_dataset,
    rmsprop_step,
    soft_cross_entropy,
    split,
    split_counts,
    task_loss,
    train
)
from bitenet_ehr.training import trainer as trainer_module
from conftest import make_journey


def many_journeys(n: int):
    return [
        make_journey(f"p{i:02d}", [
            (["dx:a", "dx:b"] if i % 2 else ["dx:c"], 0, 1),
            (["dx:b", "dx:d"], 10 + i, 12 + i),
            (["dx:a"], 100, 101),
        ])
        for i in range(n)
    ]


# SECTION: losses
def test_bce_worked_values():
    half = bce_loss(Tensor(np.array([0.5])), np.array([1]))
    assert half.item() == pytest.approx(0.6931, abs=1e-4)
    mixed = bce_loss(Tensor(np.array([0.9, 0.2])), np.array([1, 0]))
    assert mixed.item() == pytest.approx(0.1643, abs=1e-4)


def test_bce_is_clamped_and_masked():
    assert np.isfinite(bce_loss(Tensor(np.array([0.0, 1.0])), np.array([1, 0])).item())
    masked = bce_loss(Tensor(np.array([0.5, 0.0])), np.array([1, 1]), valid=np.array([True, False]))
    assert masked.item() == pytest.approx(0.6931, abs=1e-4)


def test_soft_cross_entropy():
    loss = soft_cross_entropy(Tensor(np.array([[0.25, 0.75]])), np.array([[1.0, 1.0]]))
    assert loss.item() == pytest.approx(-0.5 * (np.log(0.25) + np.log(0.75)))


def test_task_loss_needs_labels(tiny_config, tiny_vocab, tiny_samples):
    batch = pad_samples(tiny_samples, tiny_vocab).model_copy(update={"readm_labels": None})
    with pytest.raises(ShapeError):
        task_loss(Tensor(np.zeros((batch.size, 1))), batch, tiny_config)


# SECTION: optimiser
def make_group(weight: float) -> LayerNormParams:
    return LayerNormParams(
        gain=Tensor(np.array([weight]), requires_grad=True),
        bias=Tensor(np.array([weight]), requires_grad=True),
    )


def test_rmsprop_zero_gradient_leaves_weights():
    group = make_group(1.0)
    rmsprop_step(group, {"gain": np.zeros(1), "bias": np.zeros(1)}, RMSpropState(), lr=0.1)
    assert group.gain.data.tolist() == [1.0]
    assert group.bias.data.tolist() == [1.0]


def test_rmsprop_first_step():
    group = make_group(1.0)
    state = rmsprop_step(group, {"gain": np.array([2.0])}, RMSpropState(), lr=0.01)
    assert group.gain.data[0] == pytest.approx(1.0 - 0.01 * 2.0 / np.sqrt(0.1 * 4.0 + 1e-8))
    assert group.bias.data.tolist() == [1.0]
    assert state.steps == 1
    assert state.square_avg["gain"][0] == pytest.approx(0.4)


def test_rmsprop_keeps_padding_row_zero(tiny_config):
    params = init_params(tiny_config, 4, seed=0)
    optimizer = RMSprop(params, lr=0.1)
    grads = {"code_embedding": np.ones_like(params.code_embedding.data)}
    optimizer.step(grads)
    assert np.all(params.code_embedding.data[0] == 0.0)


# SECTION: splits
def test_split_counts():
    assert split_counts(10, (0.8, 0.1, 0.1)) == (8, 1, 1)
    assert split_counts(3, (0.8, 0.1, 0.1)) == (1, 1, 1)
    with pytest.raises(PreprocessError):
        split_counts(2, (0.8, 0.1, 0.1))


def test_split_is_patient_level_and_seeded():
    samples = make_readmission_samples(many_journeys(20))
    train_, valid, test = split(samples, (0.8, 0.1, 0.1), seed=3)
    ids = [{s.patient_id for s in part} for part in (train_, valid, test)]
    assert [len(i) for i in ids] == [16, 2, 2]
    assert not (ids[0] & ids[1]) and not (ids[0] & ids[2]) and not (ids[1] & ids[2])
    assert len(train_) + len(valid) + len(test) == len(samples)
    again = split(samples, (0.8, 0.1, 0.1), seed=3)
    assert [s.patient_id for s in again[2]] == [s.patient_id for s in test]


def test_diagnosis_dataset_needs_category_map(tiny_journeys, tiny_vocab):
    with pytest.raises(ConfigError):
        build_dataset(tiny_journeys, tiny_vocab, "diagnosis", (0.8, 0.1, 0.1), seed=0)
    category_map = CategoryMap.from_entries({"dx:a": "A", "dx:b": "A", "dx:c": "B", "dx:d": "C"})
    dataset = build_dataset(
        tiny_journeys, tiny_vocab, "diagnosis", (0.8, 0.1, 0.1), seed=0, category_map=category_map)
    assert dataset.num_categories == 3
    assert all(s.dx_labels for s in dataset.samples)


# SECTION: training loop
@pytest.fixture
def dataset():
    journeys = many_journeys(12)
    return build_dataset(journeys, build_vocabulary(journeys), "readmission", (0.5, 0.25, 0.25), seed=0)


def test_zero_learning_rate_keeps_init(dataset, tiny_config, tmp_path):
    train_config = TrainConfig(epochs=3, batch_size=4, learning_rate=0.0, seed=5)
    result = train(dataset, tiny_config, train_config, log_path=tmp_path / "log.jsonl", dtype="float32")
    fresh = init_params(tiny_config, dataset.vocab.num_codes, 5, np.float32)
    for (name, a), (_, b) in zip(result.model.params.named_tensors(), fresh.named_tensors()):
        assert np.array_equal(a.data, b.data), name
    assert len(result.log) == 3
    lines = (tmp_path / "log.jsonl").read_text().splitlines()
    assert [json.loads(line)["epoch"] for line in lines] == [1, 2, 3]
    assert result.log[result.best_epoch - 1].best


def test_training_is_reproducible(dataset, tiny_config):
    train_config = TrainConfig(epochs=2, batch_size=4, learning_rate=0.01, seed=1)
    a = train(dataset, tiny_config, train_config, dtype="float32")
    b = train(dataset, tiny_config, train_config, dtype="float32")
    for (name, x), (_, y) in zip(a.model.params.named_tensors(), b.model.params.named_tensors()):
        assert np.array_equal(x.data, y.data), name
    assert [e.train_loss for e in a.log] == [e.train_loss for e in b.log]
    assert a.model.params.code_embedding.data[0].tolist() == [0.0] * tiny_config.d


def test_training_moves_weights(dataset, tiny_config):
    train_config = TrainConfig(epochs=1, batch_size=4, learning_rate=0.01, seed=1)
    result = train(dataset, tiny_config, train_config, dtype="float32")
    fresh = init_params(tiny_config, dataset.vocab.num_codes, 1, np.float32)
    assert not np.array_equal(result.model.params.head_w.data, fresh.head_w.data)
    # every first visit reads interval row 0
    assert np.any(result.model.params.interval_table.data[0] != 0.0)


def test_task_mismatch(dataset, tiny_config):
    config = tiny_config.model_copy(update={"task": "diagnosis", "num_categories": 2})
    with pytest.raises(ConfigError):
        train(dataset, config, TrainConfig(epochs=1))


def test_divergence_is_reported(dataset, tiny_config, monkeypatch):
    monkeypatch.setattr(
        trainer_module, "task_loss",
        lambda logits, batch, config: logits.sum() * float("nan"))
    with pytest.raises(DivergenceError):
        train(dataset, tiny_config, TrainConfig(epochs=1, batch_size=4))


def test_diagnosis_selection_moves_past_saturated_precision(small_synth, tmp_path):
    # with 5 categories precision@20 retrieves every category and is always 1
    files = generate(small_synth, tmp_path / "synth")
    journeys, vocab = preprocess(ingest_journeys(files.journeys), min_visits=2, min_code_freq=1)
    dataset = build_dataset(
        journeys, vocab, "diagnosis", (0.8, 0.1, 0.1), seed=0,
        category_map=load_category_map(files.categories))
    config = ModelConfig(d=8, layers=1, heads=2, dropout=0.0, interval_table_days=100, task="diagnosis")
    train_config = TrainConfig(epochs=4, batch_size=32, learning_rate=5e-3, seed=0)
    result = train(dataset, config, train_config, dtype="float32")

    assert [e.valid_metric for e in result.log] == [1.0] * 4
    losses = [e.valid_loss for e in result.log]
    assert result.best_epoch > 1
    assert result.best_epoch == losses.index(min(losses)) + 1

# import libs
import json
import numpy as np
import pytest
# local
from bitenet_ehr.ehr import pad_samples
from bitenet_ehr.errors import ParamFileError, VocabularyMismatchError
from bitenet_ehr.network import BiteNet, init_params, load_params, save_params


@pytest.fixture
def model(tiny_config, tiny_vocab) -> BiteNet:
    params = init_params(tiny_config, tiny_vocab.num_codes, seed=9)
    params.interval_table.data[...] = np.random.default_rng(1).normal(
        size=params.interval_table.shape).astype(np.float32)
    return BiteNet(tiny_config, params, tiny_vocab.content_hash())


def test_round_trip_is_bitwise(model, tmp_path, tiny_vocab, tiny_samples):
    path = save_params(model, tmp_path / "params.bin")
    loaded = load_params(path, expected_vocab_hash=tiny_vocab.content_hash())
    assert loaded.config == model.config
    assert loaded.vocab_hash == model.vocab_hash
    for (name, a), (other, b) in zip(model.params.named_tensors(), loaded.params.named_tensors()):
        assert name == other
        assert a.dtype == b.dtype
        assert a.data.tobytes() == b.data.tobytes(), name

    batch = pad_samples(tiny_samples, tiny_vocab)
    assert np.array_equal(model.predict(batch).logits, loaded.predict(batch).logits)


@pytest.mark.parametrize("variant", ["attention", "interval", "diremask"])
def test_ablation_round_trip(tiny_config, tiny_vocab, tmp_path, variant):
    config = tiny_config.model_copy(update={"variant": variant})
    model = BiteNet(config, init_params(config, tiny_vocab.num_codes, seed=2), "h")
    loaded = load_params(save_params(model, tmp_path / "p.bin"))
    assert loaded.config.variant == variant
    assert loaded.params.parameter_count() == model.params.parameter_count()


def test_float64_round_trip(tiny_config, tmp_path):
    params = init_params(tiny_config, 4, seed=0, dtype=np.float64)
    loaded = load_params(save_params(BiteNet(tiny_config, params, "h"), tmp_path / "p.bin"))
    assert loaded.params.code_embedding.dtype == np.float64
    assert np.array_equal(loaded.params.head_w.data, params.head_w.data)


def test_file_layout(model, tmp_path):
    raw = save_params(model, tmp_path / "p.bin").read_bytes()
    magic, length, rest = raw.split(b"\n", 2)
    assert magic == b"BITENET-PARAMS 1"
    header = json.loads(rest[:int(length)])
    assert header["version"] == 1
    assert header["vocab_hash"] == model.vocab_hash
    assert header["arrays"][0] == {
        "name": "code_embedding", "dtype": "<f4", "shape": [model.num_codes + 1, model.config.d]}
    values = sum(int(np.prod(a["shape"])) for a in header["arrays"])
    assert len(rest) - int(length) == 4 * values


def test_vocabulary_mismatch(model, tmp_path):
    path = save_params(model, tmp_path / "p.bin")
    with pytest.raises(VocabularyMismatchError):
        load_params(path, expected_vocab_hash="0" * 64)


def test_truncated_file(model, tmp_path):
    path = save_params(model, tmp_path / "p.bin")
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(ParamFileError):
        load_params(path)


def test_trailing_bytes(model, tmp_path):
    path = save_params(model, tmp_path / "p.bin")
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(ParamFileError):
        load_params(path)


def test_not_a_parameter_file(tmp_path):
    path = tmp_path / "p.bin"
    path.write_bytes(b"hello\nworld\n")
    with pytest.raises(ParamFileError):
        load_params(path)
    with pytest.raises(ParamFileError):
        load_params(tmp_path / "missing.bin")


def test_corrupt_header(model, tmp_path):
    path = save_params(model, tmp_path / "p.bin")
    magic, length, rest = path.read_bytes().split(b"\n", 2)
    path.write_bytes(magic + b"\n" + length + b"\n[" + rest[1:])
    with pytest.raises(ParamFileError):
        load_params(path)

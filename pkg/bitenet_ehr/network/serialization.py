# import libs
import json
import logging
from pathlib import Path
from typing import Optional, Union
import numpy as np
from pydantic import ValidationError
# local
from .bitenet import BiteNet
from .params import BiteNetParams, init_params
from ..config import format_version, params_magic
from ..errors import ParamFileError, VocabularyMismatchError
from ..models import ModelConfig

# NOTE: logger
logger = logging.getLogger(__name__)

# Layout:
#   BITENET-PARAMS <version>\n
#   <header byte length>\n
#   <header JSON: config, vocab_hash, arrays[{name, dtype, shape}]>
#   raw little-endian C-order bytes of every array, in header order


def _header(model: BiteNet) -> bytes:
    arrays = [
        {"name": name, "dtype": tensor.data.dtype.newbyteorder("<").str, "shape": list(tensor.shape)}
        for name, tensor in model.params.named_tensors()
    ]
    doc = {
        "version": format_version,
        "config": model.config.model_dump(mode="json"),
        "vocab_hash": model.vocab_hash,
        "arrays": arrays,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_params(model: BiteNet, path: Union[str, Path]) -> Path:
    """
    Write a model to the binary parameter file.

    Parameters
    ----------
    model : BiteNet
        Configuration, parameters and vocabulary hash to store.
    path : str or Path
        Destination; parent directories are created.

    Returns
    -------
    Path
        The written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _header(model)
    with open(path, "wb") as f:
        f.write(params_magic + f" {format_version}\n".encode("ascii"))
        f.write(f"{len(header)}\n".encode("ascii"))
        f.write(header)
        for _, tensor in model.params.named_tensors():
            data = np.ascontiguousarray(tensor.data)
            f.write(data.astype(data.dtype.newbyteorder("<"), copy=False).tobytes(order="C"))
    logger.info(f"parameters written: {path} ({model.params.parameter_count()} values)")
    return path


def _read_line(raw: bytes, start: int, path: Path) -> tuple:
    end = raw.find(b"\n", start)
    if end < 0:
        raise ParamFileError(f"{path}: truncated header")
    return raw[start:end], end + 1


def load_params(
    path: Union[str, Path],
    expected_vocab_hash: Optional[str] = None
) -> BiteNet:
    """
    Read a parameter file written by ``save_params``.

    Parameters
    ----------
    path : str or Path
        Parameter file.
    expected_vocab_hash : str, optional
        Content hash of the vocabulary the caller will feed the model.

    Returns
    -------
    BiteNet
        Bitwise copy of the saved model.

    Raises
    ------
    ParamFileError
        Missing, corrupt or truncated file.
    VocabularyMismatchError
        ``expected_vocab_hash`` differs from the stored hash.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ParamFileError(f"{path}: cannot read parameter file: {e}") from e

    magic_line, pos = _read_line(raw, 0, path)
    parts = magic_line.split(b" ")
    if len(parts) != 2 or parts[0] != params_magic:
        raise ParamFileError(f"{path}: not a bitenet parameter file")
    if parts[1] != str(format_version).encode("ascii"):
        raise ParamFileError(f"{path}: unsupported format version {parts[1].decode(errors='replace')}")

    length_line, pos = _read_line(raw, pos, path)
    try:
        header_len = int(length_line)
        header = json.loads(raw[pos:pos + header_len].decode("utf-8"))
        config = ModelConfig.model_validate(header["config"])
        vocab_hash = str(header["vocab_hash"])
        arrays = header["arrays"]
    except (ValueError, KeyError, TypeError, ValidationError) as e:
        raise ParamFileError(f"{path}: corrupt header: {e}") from e
    pos += header_len

    if expected_vocab_hash is not None and expected_vocab_hash != vocab_hash:
        raise VocabularyMismatchError(
            f"{path}: parameters were trained on vocabulary {vocab_hash[:12]}, "
            f"data has vocabulary {expected_vocab_hash[:12]}")

    loaded = {}
    for entry in arrays:
        dtype = np.dtype(entry["dtype"])
        shape = tuple(int(s) for s in entry["shape"])
        nbytes = dtype.itemsize * int(np.prod(shape, dtype=np.int64))
        if pos + nbytes > len(raw):
            raise ParamFileError(f"{path}: truncated while reading '{entry['name']}'")
        array = np.frombuffer(raw, dtype=dtype, count=nbytes // dtype.itemsize, offset=pos)
        loaded[entry["name"]] = array.reshape(shape).astype(dtype.newbyteorder("="))
        pos += nbytes
    if pos != len(raw):
        raise ParamFileError(f"{path}: {len(raw) - pos} trailing bytes after the last array")

    embedding = loaded.get("code_embedding")
    if embedding is None:
        raise ParamFileError(f"{path}: no code_embedding array")
    dtype = embedding.dtype
    params: BiteNetParams = init_params(config, embedding.shape[0] - 1, seed=0, dtype=dtype)
    names = [name for name, _ in params.named_tensors()]
    if sorted(names) != sorted(loaded):
        raise ParamFileError(f"{path}: arrays do not match variant '{config.variant}'")
    for name, tensor in params.named_tensors():
        if tensor.shape != loaded[name].shape:
            raise ParamFileError(
                f"{path}: '{name}' has shape {loaded[name].shape}, expected {tensor.shape}")
        tensor.data = loaded[name]
        tensor.grad = np.zeros_like(tensor.data)

    logger.info(f"parameters loaded: {path} (variant={config.variant}, task={config.task})")
    return BiteNet(config, params, vocab_hash)

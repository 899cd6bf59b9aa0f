from .params import (
    BiteNetParams,
    init_params,
    expected_parameter_count,
    masenc_param_count,
    pooling_param_count
)
from .bitenet import (
    BiteNet,
    ForwardTrace,
    embed_codes,
    encode_visit,
    interval_encode,
    forward,
    predict_proba
)
from .serialization import save_params, load_params

__all__ = [
    "BiteNetParams",
    "init_params",
    "expected_parameter_count",
    "masenc_param_count",
    "pooling_param_count",
    "BiteNet",
    "ForwardTrace",
    "embed_codes",
    "encode_visit",
    "interval_encode",
    "forward",
    "predict_proba",
    "save_params",
    "load_params",
]

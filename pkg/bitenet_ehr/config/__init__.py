from .settings import (
    __author__,
    __version__,
    __author_email__,
    __description__,
    Settings,
    get_config
)
# constants
from .constants import (
    code_namespaces,
    dx_prefix,
    px_prefix,
    date_format,
    dataset_modes,
    default_min_visits,
    default_min_code_freq,
    default_window_days,
    NEG,
    PAD_ID,
    layer_norm_eps,
    ffn_multiplier,
    precision_ks,
    nns_ks,
    probability_clamp,
    format_version,
    params_magic
)

__all__ = [
    "__author__",
    "__version__",
    "__author_email__",
    "__description__",
    "Settings",
    "get_config",
    "code_namespaces",
    "dx_prefix",
    "px_prefix",
    "date_format",
    "dataset_modes",
    "default_min_visits",
    "default_min_code_freq",
    "default_window_days",
    "NEG",
    "PAD_ID",
    "layer_norm_eps",
    "ffn_multiplier",
    "precision_ks",
    "nns_ks",
    "probability_clamp",
    "format_version",
    "params_magic"
]

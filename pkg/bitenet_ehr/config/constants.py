# import libs

# SECTION: journey format
# namespace prefixes a code string must carry
code_namespaces = ("dx:", "px:")
dx_prefix = "dx:"
px_prefix = "px:"
date_format = "%Y-%m-%d"

# dataset modes (Dx or Dx&Tx)
dataset_modes = ("dx", "dxtx")

# SECTION: preprocessing defaults
default_min_visits = 2
default_min_code_freq = 5
default_window_days = 30

# SECTION: attention
# additive value used for disabled attention entries
NEG = -1e9
# padding code id; real vocabulary ids start at 1
PAD_ID = 0
layer_norm_eps = 1e-6
ffn_multiplier = 4

# SECTION: evaluation
precision_ks = (5, 10, 15, 20, 25, 30)
nns_ks = (1, 5, 10)
probability_clamp = 1e-7

# SECTION: file formats
format_version = 1
params_magic = b"BITENET-PARAMS"

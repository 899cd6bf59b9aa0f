from .config import __author__, __version__, __author_email__, __description__
from .app import cmd_synth, cmd_train, cmd_evaluate, cmd_embed, cmd_explain
from .cli import main

__all__ = [
    "__author__",
    "__version__",
    "__author_email__",
    "__description__",
    "cmd_synth",
    "cmd_train",
    "cmd_evaluate",
    "cmd_embed",
    "cmd_explain",
    "main",
]

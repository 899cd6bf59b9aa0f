# import libs
from pathlib import Path
from typing import Optional, Union


class BiteNetError(Exception):
    """Base class for every error raised by bitenet-ehr."""


class ConfigError(BiteNetError):
    """Invalid or unknown configuration key/value."""


class IngestionError(BiteNetError):
    """
    A journey file could not be parsed.

    Parameters
    ----------
    message : str
        What went wrong.
    path : str or Path, optional
        The offending file.
    line : int, optional
        1-based line number inside the file.
    """

    def __init__(
        self,
        message: str,
        path: Optional[Union[str, Path]] = None,
        line: Optional[int] = None
    ):
        self.path = str(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = self.path
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class CategoryMapError(IngestionError):
    """Malformed category map or a code the map does not cover."""


class PreprocessError(BiteNetError):
    """Preprocessing produced no usable data."""


class ShapeError(BiteNetError, ValueError):
    """Tensor shapes do not line up."""


class MaskError(BiteNetError, ValueError):
    """Unknown mask kind or invalid mask request."""


class ParamFileError(BiteNetError):
    """Corrupt, truncated or unsupported parameter file."""


class VocabularyMismatchError(ParamFileError):
    """Parameters were trained on a different vocabulary."""


class DivergenceError(BiteNetError):
    """Training loss became NaN or infinite."""


class UnknownPatientError(BiteNetError):
    """A requested patient id is not in the data."""


class OutputExistsError(BiteNetError):
    """Refusing to overwrite an existing output without --force."""


__all__ = [
    "BiteNetError",
    "ConfigError",
    "IngestionError",
    "CategoryMapError",
    "PreprocessError",
    "ShapeError",
    "MaskError",
    "ParamFileError",
    "VocabularyMismatchError",
    "DivergenceError",
    "UnknownPatientError",
    "OutputExistsError",
]

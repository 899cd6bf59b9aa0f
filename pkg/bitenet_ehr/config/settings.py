# PACKAGE INFORMATION
# --------------------
# import libs
from pathlib import Path
from typing import Literal
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

__version__ = "0.1.0"
__description__ = "BiteNet-EHR"
__author__ = "Sina Gilassi"
__author_email__ = "sina.gilassi@gmail.com"


class Settings(BaseSettings):
    """Process-level settings for bitenet-ehr."""

    model_config = SettingsConfigDict(
        env_prefix="BITENET_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Package metadata
    version: str = __version__
    description: str = __description__
    author: str = __author__

    # Directory where the package is installed
    base_dir: Path = Field(
        default_factory=lambda: Path(__file__).parent.parent)

    # default output directory for commands without an explicit one
    output_dir: Path = Field(
        default=Path("runs"),
        description="Default output directory for CLI commands."
    )

    log_level: str = Field(
        default="INFO",
        description="Root log level used by the CLI."
    )

    log_format: str = Field(
        default="%(name)s: %(message)s",
        description="Log record format passed to the rich handler."
    )

    train_dtype: Literal["float32", "float64"] = Field(
        default="float32",
        description="Floating point precision used for training math."
    )


def get_config() -> Settings:
    """
    Get the application settings.

    Returns
    -------
    Settings
        The application settings.
    """
    return Settings()

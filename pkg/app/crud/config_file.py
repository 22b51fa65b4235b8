"""
Flat TOML fit configuration files.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Union

import structlog
from pydantic import ValidationError

from app.core.errors import ConfigurationError
from app.schemas.config import FlatFitConfig

logger = structlog.get_logger(__name__)


def read_fit_config(path: Union[str, Path]) -> FlatFitConfig:
    """
    Parse a flat key-value TOML document into FlatFitConfig.

    Raises:
        ConfigurationError: missing file, invalid TOML, unknown keys or bad values
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Config file {path} does not exist")
    try:
        document = tomllib.loads(path.read_text())
        config = FlatFitConfig(**document)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid TOML ({exc})") from exc
    except ValidationError as exc:
        raise ConfigurationError(
            f"{path}: {exc.error_count()} invalid entries", {"errors": exc.errors()}
        ) from exc
    logger.info("Fit config read", path=str(path), keys=sorted(document))
    return config


def write_fit_config(config: FlatFitConfig, path: Union[str, Path]) -> Path:
    """Write the set keys of a FlatFitConfig as TOML."""
    path = Path(path)
    lines = []
    for key, value in config.model_dump(exclude_none=True).items():
        if isinstance(value, list):
            rendered = "[" + ", ".join(repr(float(v)) for v in value) + "]"
        elif isinstance(value, bool):
            rendered = str(value).lower()
        else:
            rendered = repr(value)
        lines.append(f"{key} = {rendered}")
    path.write_text("\n".join(lines) + "\n")
    return path

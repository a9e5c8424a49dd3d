"""Runtime settings read from the environment"""
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from liesym.errors import SpecError

DEGREE_ENV_VAR = 'LIESYM_DEGREE_DEFAULT'
LOG_LEVEL_ENV_VAR = 'LIESYM_LOG_LEVEL'
DEFAULT_DEGREE = 2


@dataclass(frozen=True)
class Settings:
    """Settings shared by the solver and the command line front end.

    Attributes:
        degree (int): default polynomial degree of the collineation ansatz.
        log_level (str): name of the logging level.
    """
    degree: int = DEFAULT_DEGREE
    log_level: str = 'INFO'


def _parse_degree(raw: str) -> int:
    try:
        degree = int(raw)
    except ValueError:
        raise SpecError(
            f'{DEGREE_ENV_VAR} must be an integer, got {raw!r}',
            field=DEGREE_ENV_VAR,
        )
    if degree < 1:
        raise SpecError(
            f'{DEGREE_ENV_VAR} must be at least 1, got {degree}',
            field=DEGREE_ENV_VAR,
        )
    return degree


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """Build Settings from environment variables.

    Args:
        environ (Optional[Mapping[str, str]], optional):
            Mapping to read from. Defaults to os.environ.

    Returns:
        Settings: validated settings
    """
    if environ is None:
        environ = os.environ
    raw_degree = environ.get(DEGREE_ENV_VAR, '').strip()
    degree = _parse_degree(raw_degree) if raw_degree else DEFAULT_DEGREE
    log_level = environ.get(LOG_LEVEL_ENV_VAR, 'INFO').strip().upper()
    return Settings(degree=degree, log_level=log_level or 'INFO')

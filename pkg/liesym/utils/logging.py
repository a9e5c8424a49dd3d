import logging
import os
from typing import Optional
import sys


FORMATTER = logging.Formatter(
    "%(asctime)s | %(name)s | %(levelname)s | %(message)s"
)
DEFAULT_LEVEL = logging.INFO
LEVEL_ENV_VAR = 'LIESYM_LOG_LEVEL'


def get_module_name() -> str:
    return __name__.split('.')[0]


def get_logger(
    name: Optional[str]
) -> logging.Logger:
    """
    Creates and returns a logging object

    Args:
        name (Optional[str]): name of the logger

    Returns:
        logging.Logger: logging object
    """
    if name is None:
        name = get_module_name()
    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        _configure_logger(logger)
    return logger


def get_console_handler():
    # stdout carries the JSON reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(FORMATTER)
    return console_handler


def get_level() -> int:
    level_name = os.environ.get(LEVEL_ENV_VAR, '').strip().upper()
    if not level_name:
        return DEFAULT_LEVEL
    level = logging.getLevelName(level_name)
    if isinstance(level, int):
        return level
    return DEFAULT_LEVEL


def _configure_logger(
    logger: logging.Logger,
) -> None:
    console_handler = get_console_handler()
    logger.addHandler(console_handler)
    logger.setLevel(get_level())
    logger.propagate = False
    return

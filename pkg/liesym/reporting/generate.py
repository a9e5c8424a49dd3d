import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from liesym.utils.logging import get_logger

LOG = get_logger(__name__)

REPORTS = (
    'collineations',
    'determining',
    'verify',
    'heat',
    'noether',
    'counts',
    'wave',
    'lie_ode',
)


@lru_cache(maxsize=None)
def get_environment() -> Environment:
    template_dir = Path(__file__).resolve().parent / 'templates'
    return Environment(
        loader=FileSystemLoader(template_dir),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )


def render_report(kind: str, info: dict) -> str:
    """Render the markdown report of one command.

    Args:
        kind (str): report name, one of REPORTS
        info (dict): JSON view of the result

    Returns:
        str: markdown text
    """
    if kind not in REPORTS:
        raise ValueError(f'unknown report {kind!r}')
    template = get_environment().get_template(f'{kind}.md.j2')
    return template.render(info)


def save_report(
    text: str,
    save_dir: str,
    filename: str,
    logger: Optional[logging.Logger] = None,
) -> Path:
    """Write a report into save_dir, refusing to overwrite.

    Raises:
        FileExistsError: the target file exists
    """
    if not os.path.isdir(save_dir):
        os.makedirs(Path(save_dir))
    fpath = Path(save_dir) / filename
    if fpath.exists():
        raise FileExistsError(f'{fpath} already exists')
    with open(fpath, 'w', encoding='utf-8') as fid:
        fid.write(text)
    abs_path = fpath.resolve()
    (logger or LOG).info(f'Report generated at: {abs_path}')
    return abs_path

from .logging import get_logger  # noqa: F401
from .config import Settings, load_settings  # noqa: F401

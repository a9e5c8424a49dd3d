from .generate import REPORTS, render_report, save_report  # noqa: F401

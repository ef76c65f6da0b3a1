import faulthandler
import logging
import sys
from pathlib import Path

from app.core.config import settings

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_crash_log = None


def setup_logging(level: str | None = None, log_file: str | None = None) -> None:
    """Configure the root logger once; repeated calls only adjust the level."""
    global _crash_log

    level = (level or settings.log_level).upper()
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
    root.setLevel(level)

    log_file = log_file or settings.log_file
    if log_file and _crash_log is None:
        path = Path(log_file).resolve()
        _crash_log = open(path, "a", encoding="utf-8", buffering=1)
        # fatal crashes (segfaults inside LAPACK included) land in the same file
        faulthandler.enable(_crash_log)
        file_handler = logging.StreamHandler(_crash_log)
        file_handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(file_handler)

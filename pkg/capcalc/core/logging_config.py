# capcalc/core/logging_config.py
import logging
import sys
from typing import Optional

from capcalc.core.config import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Configure root logging for a CLI run. stdout stays reserved for results."""
    level_name = (level or settings.CAPCALC_LOG_LEVEL).upper()
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = log_file or settings.CAPCALC_LOG_FILE
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )

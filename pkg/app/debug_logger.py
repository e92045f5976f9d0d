#!/usr/bin/env python3
"""
Logging setup and timing for the Contractive Inequality Lab
Configures the 'app' logger hierarchy and provides a wall-clock timer
"""

import logging
import platform
import sys
import time
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
LOG_FILE_NAME = "lab_log.txt"

_ROOT_NAME = "app"


def setup_logging(log_dir: Optional[Path] = None, level: str = "INFO",
                  file_logging: bool = True) -> logging.Logger:
    """
    Configure the package logger: console on stderr plus an optional log file.

    Calling it again replaces the handlers instead of stacking them.

    Args:
        log_dir: Directory for lab_log.txt (created if missing)
        level: Level name (DEBUG, INFO, WARNING, ERROR)
        file_logging: Write to log_dir/lab_log.txt as well as stderr

    Returns:
        The configured 'app' logger
    """
    logger = logging.getLogger(_ROOT_NAME)
    numeric_level = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"unknown log level: {level}")
    logger.setLevel(numeric_level)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter)
    logger.addHandler(console)

    if file_logging and log_dir is not None:
        try:
            log_dir = Path(log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_dir / LOG_FILE_NAME, encoding='utf-8')
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except OSError as e:
            logger.warning(f"File logging disabled, could not open log in {log_dir}: {e}")

    logger.propagate = False
    return logger


def log_system_info(logger: logging.Logger) -> None:
    """Write platform and numeric stack versions at DEBUG level"""
    import numpy
    import scipy

    logger.debug(f"Platform: {platform.system()} {platform.release()}")
    logger.debug(f"Python: {sys.version.split()[0]}, numpy {numpy.__version__}, scipy {scipy.__version__}")


class Timer:
    """Wall-clock timer reporting milliseconds"""

    def __init__(self):
        self._start: Optional[float] = None
        self._elapsed: Optional[float] = None

    def start(self) -> "Timer":
        self._start = time.perf_counter()
        self._elapsed = None
        return self

    def stop(self) -> float:
        """Stop the timer and return elapsed milliseconds"""
        if self._start is None:
            return 0.0
        self._elapsed = (time.perf_counter() - self._start) * 1000.0
        return self._elapsed

    @property
    def elapsed_ms(self) -> float:
        if self._elapsed is not None:
            return self._elapsed
        if self._start is None:
            return 0.0
        return (time.perf_counter() - self._start) * 1000.0

    def __enter__(self) -> "Timer":
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()

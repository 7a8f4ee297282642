"""
Console logging for the command-line tool.
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from lpbounds.config import get_settings

_HANDLER_NAME = "lpbounds-rich"


def configure_logging(level: Optional[str] = None, console: Optional[Console] = None) -> None:
    """
    Route ``lpbounds`` log records to a rich handler on stderr.

    Args:
        level: Level name; defaults to ``settings.log_level``
        console: Console to write to (a stderr console by default)

    Raises:
        ValueError: On an unknown level name
    """
    name = (level or get_settings().log_level).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level {level!r}")

    logger = logging.getLogger("lpbounds")
    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=get_settings().debug,
    )
    handler.set_name(_HANDLER_NAME)
    logger.addHandler(handler)
    logger.setLevel(numeric)

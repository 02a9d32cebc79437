from .base import BaseDocument, BaseSchema
from .config import CommonSettings, get_settings, settings
from .exceptions import E2ENerError
from .logging_config import get_logger, setup_logging

__all__ = [
    "settings",
    "CommonSettings",
    "get_settings",
    "BaseSchema",
    "BaseDocument",
    "E2ENerError",
    "setup_logging",
    "get_logger",
]

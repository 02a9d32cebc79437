from .core import (
    BaseDocument,
    BaseSchema,
    CommonSettings,
    E2ENerError,
    get_logger,
    get_settings,
    settings,
    setup_logging,
)

__all__ = [
    # Core: Config
    "settings",
    "get_settings",
    "CommonSettings",
    # Core: Logging
    "setup_logging",
    "get_logger",
    # Core: Base models
    "BaseSchema",
    "BaseDocument",
    # Core: Errors
    "E2ENerError",
]

"""
Logging configuration for rlfont
Diagnostics go to standard error; standard output carries results only.
"""
import logging.config
import sys
from typing import Any, Dict

DEFAULT_LOG_LEVEL = "WARNING"

LOGGING_CONFIG: Dict[str, Any] = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            "datefmt": "%H:%M:%S"
        },
        "simple": {
            "format": "%(levelname)s: %(message)s"
        }
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
            "stream": sys.stderr,
            "level": "DEBUG"
        }
    },
    "loggers": {
        "app": {
            "level": DEFAULT_LOG_LEVEL,
            "handlers": ["console"],
            "propagate": False
        }
    },
    "root": {
        "level": DEFAULT_LOG_LEVEL,
        "handlers": ["console"]
    }
}


def setup_logging(level: str = DEFAULT_LOG_LEVEL, verbose: bool = False) -> None:
    """Apply the logging configuration at the requested console level"""
    level = "DEBUG" if verbose else level.upper()
    config = {
        **LOGGING_CONFIG,
        "handlers": {
            "console": {
                **LOGGING_CONFIG["handlers"]["console"],
                "stream": sys.stderr,
                "formatter": "default" if verbose else "simple",
            }
        },
        "loggers": {name: {**entry, "level": level} for name, entry in LOGGING_CONFIG["loggers"].items()},
        "root": {**LOGGING_CONFIG["root"], "level": level},
    }
    logging.config.dictConfig(config)

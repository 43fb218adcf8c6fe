import logging, logging.config
import os

from dotenv import load_dotenv

load_dotenv(override=True)

g_log_level = os.getenv("SUBFACTOR_LOG_LEVEL", "INFO").upper()
g_log_file_name = os.getenv("SUBFACTOR_LOG_FILE", "_logs/subfactor.log")

g_handlers: dict[str, dict] = {}
if g_log_file_name:
    os.makedirs(os.path.dirname(g_log_file_name) or ".", exist_ok=True)
    g_handlers["file"] = {
        "class": "logging.handlers.RotatingFileHandler",
        "formatter": "default",
        "filename": g_log_file_name,
        "maxBytes": 10485760,  # 10MB
        "backupCount": 2,
    }
else:
    g_handlers["null"] = {"class": "logging.NullHandler"}

g_logging_config = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": g_handlers,
    "formatters": {
        "default": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        }
    },
    "loggers": {
        "root": {
            "handlers": list(g_handlers),
            "level": "WARNING",
        },
        __package__: {
            "handlers": list(g_handlers),
            "level": g_log_level,
            "propagate": False,
        },
    },
}

logging.config.dictConfig(g_logging_config)

logger = logging.getLogger(__package__)
logger.info(f"Logger initialized with level: {g_log_level}")

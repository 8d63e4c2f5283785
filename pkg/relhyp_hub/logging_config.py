import json
import logging
import logging.handlers
from datetime import datetime

from relhyp_hub.infra.settings import SettingsLoader

_EXTRA_FIELDS = (
    "action",
    "operation",
    "object_count",
    "vertex_count",
    "edge_count",
    "delta",
    "result",
    "error_type",
    "error_message",
    "execution_time_ms",
)


def setup_logging() -> logging.Logger:
    """
    Настраивает систему логирования для приложения
    """
    settings = SettingsLoader()

    log_format = settings.log_format
    log_level = getattr(logging, str(settings.log_level).upper(), logging.INFO)

    if log_format == "json":
        formatter: logging.Formatter = JsonFormatter()
    else:
        formatter = logging.Formatter(
            fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )

    logger = logging.getLogger("relhyp")
    logger.setLevel(log_level)
    logger.propagate = False

    log_file = settings.get_log_file_path("relhyp.log")
    file_handler = logging.handlers.RotatingFileHandler(
        filename=log_file,
        maxBytes=settings.get("max_log_file_size_mb", 10) * 1024 * 1024,
        backupCount=settings.get("max_log_files", 5),
        encoding="utf-8",
    )
    file_handler.setFormatter(formatter)
    file_handler.setLevel(log_level)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler.setLevel(logging.WARNING)

    logger.handlers.clear()
    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger


class JsonFormatter(logging.Formatter):
    """
    Форматтер для JSON логов
    """
    def format(self, record):
        log_record = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        for field in _EXTRA_FIELDS:
            if hasattr(record, field):
                log_record[field] = getattr(record, field)
        for key, value in record.__dict__.items():
            if key.startswith("param_"):
                log_record[key] = value

        if record.exc_info:
            log_record["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_record, ensure_ascii=False, default=str)


def get_logger(name: str = "relhyp") -> logging.Logger:
    """
    Возвращает логгер с заданным именем
    """
    return logging.getLogger(name)

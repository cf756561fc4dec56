"""Logging configuration."""
import logging
import sys
from typing import Any, Dict, Optional
from pythonjsonlogger import jsonlogger
from cartan_sub.config import settings


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """Custom JSON formatter with additional fields."""

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any]
    ):
        super().add_fields(log_record, record, message_dict)
        log_record['app_name'] = settings.app_name
        log_record['app_version'] = settings.app_version
        log_record['environment'] = settings.environment
        job = getattr(record, 'job', None)
        if job:
            log_record['job'] = job


class JobAdapter(logging.LoggerAdapter):
    """Prefix messages with the job tag of a worker run."""

    def process(self, msg, kwargs):
        job = self.extra.get("job", "-")
        kwargs.setdefault("extra", {})["job"] = job
        return f"[job={job}] {msg}", kwargs


def job_logger(name: str, job: str) -> JobAdapter:
    """Return a logger whose records carry the given job tag."""
    return JobAdapter(logging.getLogger(name), {"job": job})


def setup_logging(level: Optional[str] = None):
    """Setup application logging."""
    log_level = getattr(logging, (level or settings.log_level).upper())

    # Root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Remove existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    # stdout carries reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)

    if settings.is_production:
        # JSON format for production
        formatter = CustomJsonFormatter(
            '%(timestamp)s %(level)s %(name)s %(message)s'
        )
    else:
        # Human-readable format for development
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    # Reduce noise from libraries
    logging.getLogger("sympy").setLevel(logging.WARNING)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)

    return root_logger


# Initialize logging
logger = setup_logging()

# common/util/app_logger.py
import logging
import sys

from common.config.settings import get_settings

# attributes every LogRecord carries; anything else came in through `extra`
_RESERVED = set(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class _ExtraFormatter(logging.Formatter):
    """Appends `extra={...}` fields as key=value pairs after the message."""

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        fields = {k: v for k, v in vars(record).items() if k not in _RESERVED}
        if not fields:
            return base
        tail = " ".join(f"{k}={v}" for k, v in sorted(fields.items()))
        return f"{base} | {tail}"


class AppLogger:
    """
    Static-style logger factory.
    Usage:
        logger = AppLogger.get_logger(__name__)
        logger.info("ip_built", extra={"rows": 7, "cols": 7})
    """

    _configured = False

    @staticmethod
    def _configure_root():
        if AppLogger._configured:
            return
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(
            _ExtraFormatter(fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s")
        )

        root = logging.getLogger()
        root.setLevel(get_settings().log_level.upper())
        root.handlers.clear()
        root.addHandler(handler)

        AppLogger._configured = True

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        AppLogger._configure_root()
        return logging.getLogger(name)

    @staticmethod
    def set_level(level: str) -> None:
        AppLogger._configure_root()
        logging.getLogger().setLevel(level.upper())

import datetime
import sys
from enum import Enum
from typing import Optional

class LogCategory(Enum):
    SYSTEM = "SYSTEM"
    SPECTRUM = "SPECTRUM"
    CURVATURE = "CURVATURE"
    HOLONOMY = "HOLONOMY"
    CLI = "CLI"
    ERROR = "ERROR"

class Logger:
    _instance = None
    _job_label: str = "-"
    _verbose: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Logger, cls).__new__(cls)
        return cls._instance

    @classmethod
    def set_job(cls, label: Optional[str]):
        """Sets the job label stamped on every line (the CLI command or sweep id)."""
        cls._job_label = label or "-"

    @classmethod
    def set_verbose(cls, verbose: bool):
        cls._verbose = bool(verbose)

    @staticmethod
    def log(category: LogCategory, message: str, job: Optional[str] = None):
        """
        Logs a message with format: [Time][Job][Category] Message
        Lines go to stderr; stdout is reserved for emitted artifacts.
        """
        label = job if job is not None else Logger._job_label
        timestamp = datetime.datetime.now().strftime("%H:%M:%S")
        formatted_msg = f"[{timestamp}][Job:{label}][{category.value}] {message}"
        print(formatted_msg, file=sys.stderr)

    @staticmethod
    def info(message: str, job: Optional[str] = None):
        Logger.log(LogCategory.SYSTEM, message, job)

    @staticmethod
    def numerics(category: LogCategory, message: str, job: Optional[str] = None):
        # Only emitted in verbose runs; quadrature refinement is chatty
        if Logger._verbose:
            Logger.log(category, message, job)

    @staticmethod
    def error(message: str, job: Optional[str] = None):
        Logger.log(LogCategory.ERROR, message, job)

    @staticmethod
    def debug(message: str, job: Optional[str] = None):
        if Logger._verbose:
            Logger.log(LogCategory.SYSTEM, f"DEBUG: {message}", job)

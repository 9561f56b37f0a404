import sys

from loguru import logger


def setup_logging(level="INFO"):
    """
    Sets up logging configuration using loguru.

    This function removes any existing loggers and adds a single stderr sink at the
    given level. Standard output is left to the tables and CSV the commands print.
    Messages include the time, log level, and message; backtrace and diagnose are
    enabled for detailed error information.

    Args:
        level (str): Minimum level, e.g. "DEBUG", "INFO" or "ERROR".
    """
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time} {level} {message}", backtrace=True, diagnose=True)

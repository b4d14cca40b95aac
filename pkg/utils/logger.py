import logging
import os

LOG_LEVEL_ENV = "KNXLAB_LOG_LEVEL"
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def get_logger(name="knxlab"):
    """
    Devuelve un logger con un único StreamHandler.

    El nivel se toma de la variable de entorno KNXLAB_LOG_LEVEL (INFO por defecto).
    """
    logger = logging.getLogger(name)
    if not logger.hasHandlers():
        level = os.getenv(LOG_LEVEL_ENV, "INFO").upper()
        logger.setLevel(getattr(logging, level, logging.INFO))
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    return logger

import logging.config
import os

import yaml

import config

LOG_LEVEL_ENV = "HETSCHED_LOG_LEVEL"


def _setup_logging():
    """Applies lib/logging.yaml; HETSCHED_LOG_LEVEL overrides the level of the `lib` logger."""
    with open(config.LIB_DIR / "logging.yaml", "r") as f:
        logging_config = yaml.safe_load(f.read())

    level = os.environ.get(LOG_LEVEL_ENV)
    if level:
        logging_config["loggers"]["lib"]["level"] = level.upper()
        logging_config["handlers"]["console"]["level"] = level.upper()

    logging.config.dictConfig(logging_config)


_setup_logging()
logging.getLogger(__name__).debug("Logging configured for hetsched.")

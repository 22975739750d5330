import logging

from apify.log import ActorLogFormatter

from .const import CSG_LOGGER_NAME
from .main import cli


def setup_logging() -> logging.Logger:
    csg_logger = logging.getLogger(CSG_LOGGER_NAME)
    if not any(isinstance(h.formatter, ActorLogFormatter) for h in csg_logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(ActorLogFormatter())
        csg_logger.addHandler(handler)
    csg_logger.setLevel(logging.INFO)
    return csg_logger


def main(args: list[str] | None = None) -> None:
    """Entry point of the `csg` script and of `python -m src`."""
    setup_logging()
    cli(args, prog_name='csg')


if __name__ == '__main__':
    main()

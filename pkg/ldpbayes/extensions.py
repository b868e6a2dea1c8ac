"""Extensions module. Process-wide singletons, initialized once at import."""

import logging

import numpyro
from rich.console import Console
from rich.logging import RichHandler

# Every likelihood and gradient runs in double precision on the CPU.
numpyro.set_platform("cpu")
numpyro.enable_x64()

console = Console()
err_console = Console(stderr=True)


def init_logging(level="INFO"):
    """Attach a rich handler to the package logger (idempotent)."""
    logger = logging.getLogger("ldpbayes")
    logger.setLevel(level.upper() if isinstance(level, str) else level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=err_console, show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    return logger

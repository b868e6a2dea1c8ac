import os

from dotenv import load_dotenv

from ldpbayes.utils.errors import ConfigError

load_dotenv()


def _thread_cap():
    raw = os.environ.get("LDP_BAYES_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"LDP_BAYES_THREADS must be an integer, got {raw!r}") from e
    if value < 1:
        raise ConfigError("LDP_BAYES_THREADS must be at least 1")
    return value


class Config:
    APP_DIR = os.path.abspath(os.path.dirname(__file__))
    PROJECT_ROOT = os.path.abspath(os.path.join(APP_DIR, os.pardir))

    LOG_LEVEL = os.environ.get("LDP_BAYES_LOG_LEVEL", "INFO")

    # Experiments
    EXPERIMENTS_CONFIG_PATH = os.environ.get(
        "LDP_BAYES_CONFIG_PATH",
        os.path.join(PROJECT_ROOT, "config", "experiments"),
    )
    OUTPUT_DIR = os.environ.get("LDP_BAYES_OUTPUT_DIR", "results")

    @staticmethod
    def threads():
        """Worker cap for concurrent repeats, read at call time."""
        return _thread_cap()

"""
Workbench Configuration Module
Reads capacity caps, thread count and log level from the environment.
Values come from a .env file when present; every setting has a safe default.
"""
import os
import logging
from dotenv import load_dotenv

load_dotenv()

DEFAULT_THREADS = 1
DEFAULT_MAX_GRAPH_RANK = 5
DEFAULT_MAX_CRITERION_RANK = 4
DEFAULT_MAX_FINER_BLOCKS = 12
DEFAULT_WPL2_WINDOW = 12
DEFAULT_LOG_LEVEL = "WARNING"

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _int_setting(name: str, default: int, minimum: int = 1) -> int:
    """Read a positive integer setting, falling back to the default on junk."""
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default
    return max(value, minimum)


def get_threads() -> int:
    """Worker threads used by graph builds and enumerations (SODLAB_THREADS)."""
    return _int_setting("SODLAB_THREADS", DEFAULT_THREADS)


def get_max_graph_rank() -> int:
    """Largest n accepted by build_graph (SODLAB_MAX_GRAPH_RANK)."""
    return _int_setting("SODLAB_MAX_GRAPH_RANK", DEFAULT_MAX_GRAPH_RANK)


def get_max_criterion_rank() -> int:
    """Largest n accepted by check_connectedness_criterion."""
    return _int_setting("SODLAB_MAX_CRITERION_RANK", DEFAULT_MAX_CRITERION_RANK)


def get_max_finer_blocks() -> int:
    """Cap on the number of blocks searched by is_finer."""
    return _int_setting("SODLAB_MAX_FINER_BLOCKS", DEFAULT_MAX_FINER_BLOCKS)


def get_wpl2_window() -> int:
    """Line bundle search window |m| <= bound for X(2) mutations."""
    return _int_setting("SODLAB_WPL2_WINDOW", DEFAULT_WPL2_WINDOW)


def get_log_level() -> int:
    """Logging level name from SODLAB_LOG_LEVEL, as a logging constant."""
    name = os.getenv("SODLAB_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def setup_logging(verbose: bool = False) -> None:
    """Configure root logging once; logs go to stderr so stdout stays clean."""
    logging.basicConfig(
        format=LOG_FORMAT,
        level=logging.DEBUG if verbose else get_log_level(),
    )


def config_info() -> dict:
    """Effective settings after .env and environment overrides."""
    return {
        "threads": get_threads(),
        "max_graph_rank": get_max_graph_rank(),
        "max_criterion_rank": get_max_criterion_rank(),
        "max_finer_blocks": get_max_finer_blocks(),
        "wpl2_window": get_wpl2_window(),
        "log_level": logging.getLevelName(get_log_level()),
    }

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv()

# Constants
DEFAULT_BUDGET = 1_000_000
DEFAULT_SEED = 0
DEFAULT_THREADS = 1
DEFAULT_BRUTE_FORCE_LIMIT = 12
DEFAULT_SAT_VAR_LIMIT = 25
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def env_int(name: str, default: int, strict: bool = False) -> int:
    """Reads an integer setting from the environment.

    Args:
        name (str): Environment variable name.
        default (int): Value used when the variable is unset or blank.
        strict (bool, optional): Raise on a malformed value instead of falling back.

    Returns:
        int: The parsed value.

    Raises:
        ValueError: If strict and the value is not an integer.
    """
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        if strict:
            raise ValueError(f"Error parsing {name} env variable: {raw!r}")
        logging.error(f"Error parsing {name} env variable: {raw!r}, using {default}")
        return default


def brute_force_limit() -> int:
    return env_int("PLCOVER_BRUTE_FORCE_LIMIT", DEFAULT_BRUTE_FORCE_LIMIT)


def sat_var_limit() -> int:
    return env_int("PLCOVER_SAT_VAR_LIMIT", DEFAULT_SAT_VAR_LIMIT)


@dataclass(frozen=True)
class RunConfig:
    """Settings of one command-line run."""

    command: str
    inputs: List[Path] = field(default_factory=list)
    budget: int = DEFAULT_BUDGET
    output: Optional[Path] = None
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    verbosity: int = 0
    json_stdout: bool = False


def load_run_config(
    command: str,
    inputs: Optional[List[Path]] = None,
    budget: Optional[int] = None,
    output: Optional[Path] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    verbosity: int = 0,
    json_stdout: bool = False,
) -> RunConfig:
    """Builds the run configuration: flags first, then environment, then defaults.

    Raises:
        ValueError: If an environment value is malformed or a setting is out of range.
    """
    config = RunConfig(
        command=command,
        inputs=list(inputs or []),
        budget=budget if budget is not None else env_int("PLCOVER_BUDGET", DEFAULT_BUDGET, strict=True),
        output=output,
        seed=seed if seed is not None else env_int("PLCOVER_SEED", DEFAULT_SEED, strict=True),
        threads=threads if threads is not None else env_int("PLCOVER_THREADS", DEFAULT_THREADS, strict=True),
        verbosity=verbosity,
        json_stdout=json_stdout,
    )
    validate_config(config)
    return config


def validate_config(config: RunConfig) -> None:
    """Checks the numeric settings of a run.

    Args:
        config (RunConfig): The configuration to check.

    Raises:
        ValueError: If the budget or thread count is not positive or the seed is negative.
    """
    if not isinstance(config.budget, int) or config.budget <= 0:
        raise ValueError("budget must be a positive integer")
    if not isinstance(config.threads, int) or config.threads <= 0:
        raise ValueError("threads must be a positive integer")
    if not isinstance(config.seed, int) or config.seed < 0:
        raise ValueError("seed must be a non-negative integer")
    if brute_force_limit() <= 0 or sat_var_limit() <= 0:
        raise ValueError("brute-force guards must be positive")


def log_level(verbosity: int = 0) -> int:
    """Maps -v flags onto a logging level, starting from PLCOVER_LOG_LEVEL."""
    if verbosity >= 1:
        return logging.DEBUG
    level = logging.getLevelName(os.getenv("PLCOVER_LOG_LEVEL", "INFO").upper())
    return level if isinstance(level, int) else logging.INFO

"""Tunable limits. Each default can be overridden through the environment."""

import os


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


# Enumeration-backed constructors refuse degrees above this.
MAX_DEGREE = _env_int("PERMDIV_MAX_DEGREE", 9)

# Node / subset count allowed for exponential searches.
WORK_BUDGET = _env_int("PERMDIV_BUDGET", 1 << 24)

# Enclosure refinement stops doubling precision here and reports undecided.
PRECISION_CAP = _env_int("PERMDIV_PRECISION_CAP", 512)

# Precision every certified comparison starts from.
START_PRECISION = 64

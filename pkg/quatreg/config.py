"""
Runtime settings read from the environment (and an optional .env file)
"""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    log_level: str = "WARNING"
    pde_tol: float = 1e-9
    form_tol: float = 1e-8
    limit_tol: float = 1e-6
    identity_tol: float = 1e-8
    directions: int = 16
    workers: int = 1


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    return float(raw) if raw not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    return int(raw) if raw not in (None, "") else default


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings once per process; environment variables win over the defaults"""
    load_dotenv()
    return Settings(
        seed=_env_int("QUATREG_SEED", 0),
        log_level=os.getenv("QUATREG_LOG_LEVEL", "WARNING").upper(),
        pde_tol=_env_float("QUATREG_PDE_TOL", 1e-9),
        form_tol=_env_float("QUATREG_FORM_TOL", 1e-8),
        limit_tol=_env_float("QUATREG_LIMIT_TOL", 1e-6),
        identity_tol=_env_float("QUATREG_IDENTITY_TOL", 1e-8),
        directions=_env_int("QUATREG_DIRECTIONS", 16),
        workers=_env_int("QUATREG_WORKERS", 1),
    )

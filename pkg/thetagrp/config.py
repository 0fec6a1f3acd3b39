# -*- coding: utf-8 -*-
"""Environment-driven settings: data folder, run catalogue, numerical tolerances, seed.

Every value is read once from a ``THETAGRP_*`` variable and cached; call
:func:`reload_settings` after changing the environment.

"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional


_DEFAULT_DATA_FOLDER = Path(__file__).resolve().parents[1] / "data"


@dataclass(frozen=True, slots=True)
class Settings:
    """Tolerances and locations shared by every command."""

    data_folder: Path
    mongodb_uri: str
    mongodb_db_name: str
    mongodb_collection_name: str
    theta_tail: float
    theta_max_radius: int
    pole_tol: float
    snap_tol: float
    null_tol: float
    quad_tol: float
    seed: Optional[int]
    save_db: bool

    @classmethod
    def from_env(cls) -> "Settings":
        """Read every ``THETAGRP_*`` variable, falling back to the defaults below."""
        return cls(
            data_folder=_parse_data_folder(os.getenv("THETAGRP_DATA_FOLDER")),
            mongodb_uri=os.getenv("THETAGRP_MONGODB_URI", "mongodb://localhost:27017"),
            mongodb_db_name=os.getenv("THETAGRP_MONGODB_DB_NAME", "thetagrp"),
            mongodb_collection_name=os.getenv("THETAGRP_MONGODB_COLLECTION_NAME", "runs"),
            theta_tail=_parse_float(
                os.getenv("THETAGRP_THETA_TAIL"), default=1e-12, env_var="THETAGRP_THETA_TAIL"
            ),
            theta_max_radius=_parse_optional_int(
                os.getenv("THETAGRP_THETA_MAX_RADIUS"), env_var="THETAGRP_THETA_MAX_RADIUS"
            )
            or 40,
            pole_tol=_parse_float(
                os.getenv("THETAGRP_POLE_TOL"), default=1e-10, env_var="THETAGRP_POLE_TOL"
            ),
            snap_tol=_parse_float(
                os.getenv("THETAGRP_SNAP_TOL"), default=1e-6, env_var="THETAGRP_SNAP_TOL"
            ),
            null_tol=_parse_float(
                os.getenv("THETAGRP_NULL_TOL"), default=1e-8, env_var="THETAGRP_NULL_TOL"
            ),
            quad_tol=_parse_float(
                os.getenv("THETAGRP_QUAD_TOL"), default=1e-12, env_var="THETAGRP_QUAD_TOL"
            ),
            seed=_parse_optional_int(os.getenv("THETAGRP_SEED"), env_var="THETAGRP_SEED"),
            save_db=_parse_flag(os.getenv("THETAGRP_SAVE_DB"), env_var="THETAGRP_SAVE_DB"),
        )


def _parse_optional_int(value: Optional[str], *, env_var: str) -> Optional[int]:
    """``None`` for an unset variable, else the integer it holds."""
    if value is None or value.strip() == "":
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise ValueError(f"{env_var} must be an integer or empty, got {value!r}.") from exc


def _parse_float(value: Optional[str], *, default: float, env_var: str) -> float:
    """Parse a positive float env var, falling back to *default* when unset."""
    if value is None or value.strip() == "":
        return default
    try:
        parsed = float(value)
    except ValueError as exc:
        raise ValueError(f"{env_var} must be a number or empty, got {value!r}.") from exc
    if not parsed > 0:
        raise ValueError(f"{env_var} must be positive, got {value!r}.")
    return parsed


def _parse_flag(value: Optional[str], *, env_var: str) -> bool:
    """Parse a ``0``/``1`` switch."""
    if value is None or value.strip() == "":
        return False
    if value.strip() in ("0", "1"):
        return value.strip() == "1"
    raise ValueError(f"{env_var} must be 0 or 1, got {value!r}.")


def _parse_data_folder(value: Optional[str]) -> Path:
    """Resolve ``THETAGRP_DATA_FOLDER``; reports go to ``<repo>/data`` when it is unset."""
    if value is None or value.strip() == "":
        return _DEFAULT_DATA_FOLDER
    return Path(value).expanduser().resolve()


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings from the environment, read on first use."""
    return Settings.from_env()


def reload_settings() -> Settings:
    """Drop the cached settings and read the environment again."""
    get_settings.cache_clear()
    return get_settings()


def get_data_folder() -> str:
    """Folder that numbered reports are written to."""
    return str(get_settings().data_folder)


def get_mongodb_uri() -> str:
    """Connection string of the run catalogue."""
    return get_settings().mongodb_uri


def get_mongodb_db_name() -> str:
    """Database holding the run catalogue."""
    return get_settings().mongodb_db_name


def get_mongodb_collection_name() -> str:
    """Collection with one document per saved report."""
    return get_settings().mongodb_collection_name


def get_theta_tail() -> float:
    """Return the relative tail target used to truncate theta series."""
    return get_settings().theta_tail


def get_theta_max_radius() -> int:
    """Return the largest summation radius a theta series may use."""
    return get_settings().theta_max_radius


def get_pole_tol() -> float:
    """Return the relative threshold below which a theta denominator counts as a pole."""
    return get_settings().pole_tol


def get_snap_tol() -> float:
    """Return the largest accepted distance when snapping to a root of unity."""
    return get_settings().snap_tol


def get_null_tol() -> float:
    """Return the relative singular-value threshold for numerical null spaces."""
    return get_settings().null_tol


def get_quad_tol() -> float:
    """Return the convergence tolerance for Gauss–Legendre period integrals."""
    return get_settings().quad_tol


def get_seed() -> Optional[int]:
    """Return the configured PRNG seed, or ``None`` if the caller must supply one."""
    return get_settings().seed


def get_save_db() -> bool:
    """Return whether finished reports are logged to MongoDB."""
    return get_settings().save_db

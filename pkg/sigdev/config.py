"""Settings: defaults overridden by SIGDEV_* variables from the environment or .env."""

import os
from collections.abc import Callable, Mapping
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from sigdev import ENV_PATH
from sigdev.errors import DomainError

ENV_PREFIX = "SIGDEV_"

SCHEMES = ("explicit", "implicit", "series", "sig", "rk", "sig-mc")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Settings:
    scheme: str = "explicit"
    dyadic_order: int = 4
    matrix_dim: int = 50
    mc_samples: int = 50
    seed: int = 0
    tol: float = 1e-8
    fmt: str = "csv"
    workers: int = 1
    log: Path | None = None
    mc_budget: int = 10**9


# Settings field -> environment suffix.
_ENV_NAMES: dict[str, str] = {
    "scheme": "SCHEME",
    "dyadic_order": "LAMBDA",
    "matrix_dim": "MATRIX_DIM",
    "mc_samples": "MC_SAMPLES",
    "seed": "SEED",
    "tol": "TOL",
    "fmt": "FORMAT",
    "workers": "WORKERS",
    "log": "LOG",
    "mc_budget": "MC_BUDGET",
}


def _parse_int(raw: str) -> int:
    return int(raw.strip())


def _parse_float(raw: str) -> float:
    return float(raw.strip())


def _parse_path(raw: str) -> Path | None:
    return Path(raw.strip()) if raw.strip() else None


_PARSERS: dict[str, Callable[[str], Any]] = {
    "scheme": str.strip,
    "dyadic_order": _parse_int,
    "matrix_dim": _parse_int,
    "mc_samples": _parse_int,
    "seed": _parse_int,
    "tol": _parse_float,
    "fmt": str.strip,
    "workers": _parse_int,
    "log": _parse_path,
    "mc_budget": _parse_int,
}


def read_env_file(path: Path) -> dict[str, str]:
    """KEY=VALUE lines starting with SIGDEV_; blank lines and # comments ignored."""
    found: dict[str, str] = {}
    if not path.exists():
        return found
    for raw_line in path.read_text(encoding="utf-8").splitlines():
        stripped = raw_line.strip()
        if not stripped or stripped.startswith("#") or "=" not in stripped:
            continue
        key, value = stripped.split("=", 1)
        if key.strip().startswith(ENV_PREFIX):
            found[key.strip()] = value.strip()
    return found


def validate(settings: Settings) -> Settings:
    if settings.scheme not in SCHEMES:
        raise DomainError(f"scheme must be one of {', '.join(SCHEMES)}, got {settings.scheme!r}")
    if settings.fmt not in FORMATS:
        raise DomainError(f"format must be csv or json, got {settings.fmt!r}")
    if not 0 <= settings.dyadic_order <= 16:
        raise DomainError(f"lambda must be in 0..16, got {settings.dyadic_order}")
    if settings.matrix_dim < 1:
        raise DomainError("matrix dimension must be >= 1")
    if settings.mc_samples < 1:
        raise DomainError("Monte-Carlo sample count must be >= 1")
    if not 0 <= settings.seed < 2**64:
        raise DomainError("seed must be a non-negative 64-bit integer")
    if not settings.tol > 0:
        raise DomainError("tolerance must be positive")
    if settings.workers < 1:
        raise DomainError("workers must be >= 1")
    if settings.mc_budget < 1:
        raise DomainError("Monte-Carlo budget must be >= 1")
    return settings


def load_settings(
    environ: Mapping[str, str] | None = None,
    env_file: Path | None = ENV_PATH,
) -> Settings:
    """Defaults, then .env, then the process environment."""
    sources: dict[str, str] = {}
    if env_file is not None:
        sources.update(read_env_file(env_file))
    sources.update({k: v for k, v in (os.environ if environ is None else environ).items() if k.startswith(ENV_PREFIX)})

    overrides: dict[str, Any] = {}
    for field in fields(Settings):
        var = ENV_PREFIX + _ENV_NAMES[field.name]
        if var not in sources:
            continue
        try:
            overrides[field.name] = _PARSERS[field.name](sources[var])
        except ValueError:
            raise DomainError(f"{var}={sources[var]!r} is not a valid value") from None
    return validate(replace(Settings(), **overrides))


def with_overrides(settings: Settings, **flags: Any) -> Settings:
    """Apply command-line values; ``None`` means the flag was not given."""
    given = {k: v for k, v in flags.items() if v is not None}
    return validate(replace(settings, **given))

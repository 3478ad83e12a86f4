"""Run configuration with flags > environment > config file > defaults layering."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

from .errors import DomainError

ENV_PREFIX = "GS_"

# Environment variable names, documented in the README.
ENV_KEYS = {
    "GS_TOLERANCE": "tolerance",
    "GS_MAX_N": "max_block_exponent",
    "GS_KL_TERMS": "kl_terms",
    "GS_ALPHA_HORIZON": "alpha_horizon",
    "GS_FORMAT": "output_format",
    "GS_CONFIG": None,  # path to a config file, handled separately
}

_INT_FIELDS = {
    "max_block_exponent",
    "kl_terms",
    "alpha_horizon",
    "alpha_horizon_max",
    "max_ladder_index",
    "ladder_digits_cap",
    "sft_max_n",
    "max_render_depth",
    "max_word_length",
}


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-12
    max_block_exponent: int = 24
    kl_terms: int = 32
    alpha_horizon: int = 256
    alpha_horizon_max: int = 4096
    max_ladder_index: int = 24
    ladder_digits_cap: int = 460
    sft_max_n: int = 12
    max_render_depth: int = 12
    max_word_length: int = 1 << 24
    output_format: str = "text"

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        if self.output_format not in ("text", "json"):
            raise DomainError("output_format must be 'text' or 'json'")
        for f in fields(self):
            if f.name in _INT_FIELDS and getattr(self, f.name) < 1:
                raise DomainError(f"{f.name} must be a positive integer")


DEFAULT_CONFIG = RunConfig()


def _coerce(name: str, raw: object) -> object:
    if name in _INT_FIELDS:
        return int(raw)  # type: ignore[arg-type]
    if name == "tolerance":
        return float(raw)  # type: ignore[arg-type]
    return str(raw)


def load_config(
    flag_values: dict | None = None,
    env: dict | None = None,
    config_path: str | None = None,
) -> RunConfig:
    """Build a RunConfig from the documented precedence chain.

    flag_values holds already-parsed CLI values (None entries are ignored);
    env defaults to os.environ; config_path falls back to GS_CONFIG.
    """
    env = os.environ if env is None else env
    cfg = DEFAULT_CONFIG

    path = config_path or env.get("GS_CONFIG")
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise DomainError(f"cannot read config file {path}: {exc}") from exc
        unknown = set(data) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **{k: _coerce(k, v) for k, v in data.items()})

    for env_key, field_name in ENV_KEYS.items():
        if field_name and env_key in env:
            cfg = replace(cfg, **{field_name: _coerce(field_name, env[env_key])})

    if flag_values:
        updates = {k: v for k, v in flag_values.items() if v is not None}
        if updates:
            cfg = replace(cfg, **{k: _coerce(k, v) for k, v in updates.items()})

    return cfg

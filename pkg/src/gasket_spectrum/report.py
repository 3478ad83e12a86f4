"""Deterministic report envelopes and canonical JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = "1"
PACKAGE_VERSION = "0.1.0"


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def decimal_str(x: Fraction, digits: int = 40) -> str:
    """Exact-truncation decimal rendering of a rational, deterministic."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole, rem = divmod(x.numerator, x.denominator)
    out = [sign, str(whole)]
    if rem and digits > 0:
        out.append(".")
        frac_digits = []
        for _ in range(digits):
            rem *= 10
            d, rem = divmod(rem, x.denominator)
            frac_digits.append(str(d))
            if rem == 0:
                break
        out.append("".join(frac_digits))
        if rem != 0:
            out.append("...")
    return "".join(out)


def jsonable(obj: Any) -> Any:
    """Recursively convert reports to JSON-ready values (Fractions to 'p/q')."""
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "to_json_dict"):
        return jsonable(obj.to_json_dict())
    return obj


def canonical_json_bytes(obj: Any) -> bytes:
    """Stable bytes: sorted keys, fixed separators, trailing newline."""
    text = json.dumps(jsonable(obj), sort_keys=True, ensure_ascii=True,
                      indent=2, separators=(",", ": "))
    return (text + "\n").encode("utf-8")


@dataclass
class Report:
    command: str
    inputs: dict
    result: Any
    timing_ms: int = 0
    version: str = PACKAGE_VERSION
    schema: str = SCHEMA_VERSION
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "timing_ms": self.timing_ms,
            "version": self.version,
            "schema": self.schema,
        }
        payload.update(self.extras)
        return payload

    def to_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_json_dict())

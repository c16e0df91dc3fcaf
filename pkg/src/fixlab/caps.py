"""Enumeration caps.

Defaults can be overridden per process through the ``FIXLAB_CAPS``
environment variable, either as a JSON object or as ``key=value`` pairs
separated by commas, e.g. ``FIXLAB_CAPS="chains=10,pataraia_q=4"``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

from .errors import SchemaError


@dataclass(frozen=True)
class Caps:
    chains: int = 12
    pataraia_q: int = 5
    prog_maps: int = 10_000
    classifier_carrier: int = 4
    blowup_n: int = 64
    arrow_stage: int = 12
    poset_enum: int = 5
    iteration_horizon: int = 4096

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise SchemaError(f"cap {f.name} must be positive")


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    text = text.strip()
    if not text:
        return base
    if text.startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for item in text.split(","):
            key, _, value = item.partition("=")
            raw[key.strip()] = value.strip()
    known = {f.name for f in fields(Caps)}
    unknown = set(raw) - known
    if unknown:
        raise SchemaError(f"unknown caps: {sorted(unknown)}")
    try:
        return replace(base, **{k: int(v) for k, v in raw.items()})
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad cap value: {exc}") from exc


def current_caps() -> Caps:
    return parse_caps(os.environ.get("FIXLAB_CAPS", ""))

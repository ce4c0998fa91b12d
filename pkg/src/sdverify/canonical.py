"""Canonical JSON: sorted keys, floats as fixed 6-fractional-digit decimals.

Reports are compared byte for byte in golden-file tests and served verbatim
by the HTTP gateway, so serialization must be stable across runs, platforms,
and process restarts.  The standard json module cannot pin float formatting,
hence this small emitter.  Output is UTF-8 text without ASCII escaping.
"""

from __future__ import annotations

import json


def _emit(value, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, float):
        parts.append(format(value, ".6f"))
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, str):
        parts.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(",")
            _emit(item, parts)
        parts.append("]")
    elif isinstance(value, dict):
        parts.append("{")
        for i, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r}")
            if i:
                parts.append(",")
            parts.append(json.dumps(key, ensure_ascii=False))
            parts.append(":")
            _emit(value[key], parts)
        parts.append("}")
    else:
        raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical_json(value) -> str:
    """Serialize nested dict/list/str/int/float/bool/None data canonically."""
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)

"""JSON encoding shared by the verification reports and the CLI.

Rationals are always emitted as ``{"num": a, "den": b}``; no floats are
ever written.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

SCHEMA = "virc1/1"


def rational(x) -> dict[str, int]:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def from_rational(obj: dict[str, int]) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def encode(obj: Any) -> Any:
    """Recursively convert Fractions/tuples/dataclass-like values to JSON types."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, float):
        raise TypeError("floating point values are not allowed in output")
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(doc: Any) -> str:
    return json.dumps(encode(doc), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


def fmt(x) -> str:
    """Table form of a rational: ``a/b`` or ``a``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

"""Exact rational helpers shared by every module."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

Value = Union[Fraction, float]


def parse_rational(text) -> Value:
    """Parse ``"p/q"``, ``"inf"``, an int or a Fraction into an exact value."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if math.isinf(text) and text > 0:
            return INF
        raise ValueError(f"floats are not accepted as exact values: {text!r}")
    if isinstance(text, str):
        s = text.strip().lower()
        if s in ("inf", "+inf", "infinity", "oo"):
            return INF
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"not a rational: {text!r}")


def format_rational(value: Value) -> str:
    if value == INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_half_integral(value: Value) -> bool:
    return value != INF and (2 * Fraction(value)).denominator == 1


def common_scale(values) -> int:
    """Least common denominator of the finite values (1 if there are none)."""
    scale = 1
    for v in values:
        if v != INF:
            scale = math.lcm(scale, Fraction(v).denominator)
    return scale

"""Exact dyadic arithmetic helpers.

All orderings in this package are decided over integers or
``fractions.Fraction``; base-2 logarithms are only ever *displayed*.  The
helpers here keep that discipline in one place:

* ``pow2(e)`` is the exact rational 2**e for any integer ``e`` (negative
  exponents included);
* ``ceil_log2(m)`` is the exact integer ceiling of log2 of a positive
  integer;
* ``log2_display`` converts exact keys to floats for reports, mapping
  ``None`` to ``math.inf`` (the conventional encoding of an empty minimum).
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["pow2", "ceil_log2", "floor_log2", "log2_display", "format_number"]


def pow2(e: int) -> Fraction:
    """Exact 2**e as a Fraction, for any integer e."""
    if e >= 0:
        return Fraction(1 << e)
    return Fraction(1, 1 << (-e))


def ceil_log2(m: int) -> int:
    """Smallest integer c with 2**c >= m, for integer m >= 1."""
    if m < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {m}")
    return (m - 1).bit_length()


def floor_log2(m: int) -> int:
    """Largest integer c with 2**c <= m, for integer m >= 1."""
    if m < 1:
        raise ValueError(f"floor_log2 needs a positive integer, got {m}")
    return m.bit_length() - 1


def log2_display(key: "int | Fraction | None") -> float:
    """Float log2 of an exact key, with None mapped to +infinity.

    Exact powers of two come out as exact floats; everything else is a
    best-effort float for human consumption only.
    """
    if key is None:
        return math.inf
    if isinstance(key, Fraction):
        num, den = key.numerator, key.denominator
        if num <= 0:
            raise ValueError(f"log2_display needs a positive key, got {key}")
        if num & (num - 1) == 0 and den & (den - 1) == 0:
            return float(num.bit_length() - den.bit_length())
        return math.log2(num) - math.log2(den)
    if key <= 0:
        raise ValueError(f"log2_display needs a positive key, got {key}")
    if key & (key - 1) == 0:
        return float(key.bit_length() - 1)
    return math.log2(key)


def format_number(v: "int | float | Fraction | None") -> str:
    """Deterministic short rendering for report files."""
    if v is None or (isinstance(v, float) and math.isinf(v)):
        return "inf"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)

"""Exact rational scalars: parsing, formatting and float rendering.

All exact quantities in this package (measures, densities, coefficients,
weights, Gram entries) are `fractions.Fraction` values, which are stored
reduced with a positive denominator and carry arbitrary-precision integers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


def parse_rational(text: str) -> Fraction:
    """Parse a "num/den" string; integer shorthand and unreduced input are fine."""
    s = str(text).strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render as "num/den" with the denominator always explicit."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def render_float(value: float, precision: int = 17) -> str:
    """Fixed significant-digit rendering; 17 digits round-trips float64."""
    return format(float(value), f".{precision}g")

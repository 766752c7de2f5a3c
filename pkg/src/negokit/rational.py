"""Exact-number plumbing.

Every score, weight and unit-interval metric in this package is a
`fractions.Fraction`. Binary floats never touch score arithmetic: JSON input
is parsed with a string hook, and values go back on the wire as exact decimal
strings ("12.4") when the rational terminates in base 10, or as fraction
strings ("7/18") when it does not.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

Rat = Fraction


def rat(value: int | str | Fraction) -> Fraction:
    """Build a Fraction from an int, a Fraction, or a numeric string.

    Strings may be decimal ("0.35"), integer ("4") or fraction ("7/18")
    notation. Floats are rejected so callers cannot smuggle binary rounding
    into score arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a number here")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


def is_terminating(x: Fraction) -> bool:
    """True when x has a finite base-10 expansion."""
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def to_wire(x: Fraction) -> str:
    """Exact string form: decimal when terminating, "p/q" otherwise."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    if not is_terminating(x):
        return f"{x.numerator}/{x.denominator}"
    sign = "-" if x < 0 else ""
    num, den = abs(x.numerator), x.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    k = max(twos, fives)
    scaled = num * 10**k // den
    digits = str(scaled).rjust(k + 1, "0")
    whole, frac = digits[:-k], digits[-k:]
    return f"{sign}{whole}.{frac}"


def from_wire(value: Any) -> Fraction:
    """Parse a wire value (string, int, or already-exact Fraction)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a score")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # Floats only appear if a JSON document was parsed without the exact
        # hook; convert via repr so "0.35" means 35/100, not the binary float.
        return Fraction(repr(value))
    raise TypeError(f"cannot parse {type(value).__name__} as an exact number")


def loads_exact(text: str) -> Any:
    """json.loads with floats parsed as exact Fractions."""
    return json.loads(text, parse_float=lambda s: Fraction(s))


class WireEncoder(json.JSONEncoder):
    """JSON encoder emitting Fractions as exact strings."""

    def default(self, o: Any) -> Any:
        if isinstance(o, Fraction):
            return to_wire(o)
        return super().default(o)


def dumps_wire(obj: Any, **kwargs: Any) -> str:
    return json.dumps(obj, cls=WireEncoder, **kwargs)

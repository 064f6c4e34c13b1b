"""Parsing helpers for numbers written on the command line or in spec files."""

import math
import re

_PI_SCALAR = re.compile(
    r"""^\s*
        (?P<coef>[+-]?(?:(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?)   # optional coefficient
        \s*\*?\s*
        (?P<pi>pi|π)                                               # pi marker
        \s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?                          # optional denominator
        \s*$""",
    re.VERBOSE,
)


def parse_scalar(text) -> float:
    """Parse a real number, accepting multiples of pi ("3pi/4", "0.5pi", "7*pi/2", "-pi").

    Raises:
        ValueError: The text is neither a float nor a pi multiple.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        pass

    match = _PI_SCALAR.match(s.lower())
    if not match:
        raise ValueError(f"not a number: {text!r}")
    coef = match.group("coef")
    if coef in (None, "", "+"):
        value = 1.0
    elif coef == "-":
        value = -1.0
    else:
        value = float(coef)
    value *= math.pi
    if match.group("den"):
        value /= float(match.group("den"))
    return value


def parse_range(text: str) -> tuple[float, float, int]:
    """Parse ``lo:hi:n`` into ``(lo, hi, n)``; lo and hi may be pi multiples."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValueError(f"expected lo:hi:n, got {text!r}")
    lo, hi = parse_scalar(parts[0]), parse_scalar(parts[1])
    n = int(parts[2])
    return lo, hi, n

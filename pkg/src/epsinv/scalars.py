"""Scalar helpers for the two arithmetic modes.

Exact mode uses :class:`fractions.Fraction` (and ``int``); float mode uses
``float``.  Values of the two kinds may be mixed, in which case ordinary
Python promotion yields floats.  Every comparison that needs slack goes
through :func:`tol_for`, which is zero whenever all operands are exact.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Rational, Real

TOL = 1e-12

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def tol_for(*xs) -> float:
    """Return 0 if every argument is exact, else the float tolerance."""
    for x in xs:
        if not isinstance(x, Rational):
            return TOL
    return 0


def parse_scalar(value, mode: str = RATIONAL):
    """Parse a JSON-ish scalar ("p/q" string, int, float, Fraction)."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, str):
        try:
            x = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {value!r}") from exc
    elif isinstance(value, Real):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite scalar {value!r}")
        x = value
    else:
        raise ValueError(f"cannot parse scalar {value!r}")
    if mode == FLOAT:
        return float(x)
    if isinstance(x, float):
        # the binary value is rational; keep it exactly
        return Fraction(x)
    return Fraction(x)


def format_scalar(x):
    """JSON form: exact values as "p/q" strings, floats unchanged."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, Rational):
        return str(Fraction(x))
    return float(x)


def convert(x, mode: str):
    if mode == FLOAT:
        return float(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def part_cap(default: int = 10**6) -> int:
    """Interval-part cap, overridable through ``EPSINV_PART_CAP``."""
    raw = os.environ.get("EPSINV_PART_CAP")
    if raw is None:
        return default
    return int(raw)

"""Exact rational helpers: parsing, formatting and integer rounding."""

from fractions import Fraction
from math import ceil

from .errors import InstanceError


def to_rational(value) -> Fraction:
    """Convert ints, Fractions and decimal or ``p/q`` strings to a Fraction.

    Floats are accepted through their shortest decimal representation, so
    ``2.5`` and ``"2.5"`` both become ``5/2``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InstanceError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"cannot parse rational {value!r}") from exc
    raise InstanceError(f"not a number: {value!r}")


def _is_terminating(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_rational(q) -> str:
    """Render a rational as a decimal string when exact, else as ``p/q``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    if not _is_terminating(q):
        return f"{q.numerator}/{q.denominator}"
    sign = "-" if q < 0 else ""
    q = abs(q)
    digits = 0
    scaled = q
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    whole, frac = divmod(scaled.numerator, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def ceil_div(num, den) -> int:
    """Exact ceiling of ``num / den`` for rationals, ``den > 0``."""
    return ceil(Fraction(num) / Fraction(den))


def positive_part(q) -> Fraction:
    q = Fraction(q)
    return q if q > 0 else Fraction(0)


def approx(q, places: int = 4) -> str:
    """Short decimal approximation for human-readable tables."""
    return f"{float(q):.{places}g}"

"""Exact rational parsing and serialization (``"p/q"`` strings)."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DomainError


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a rational: {value!r}") from None
    raise DomainError(f"not an exact rational: {value!r}")


def fmt(value) -> str:
    """``p/q`` (or just ``p`` for integers)."""
    q = Fraction(value)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

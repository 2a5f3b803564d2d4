"""Extended rationals ``Q ∪ {-inf}`` and their exact string encoding."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union


class _NegInf:
    """The point ``-inf`` of the tropical semiring; below every rational."""

    __slots__ = ()
    _instance: "_NegInf | None" = None

    def __new__(cls) -> "_NegInf":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INF"

    def __reduce__(self):
        return (_NegInf, ())

    def __hash__(self) -> int:
        return hash("tropcoh.NEG_INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __add__(self, other: object) -> "_NegInf":
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__


NEG_INF = _NegInf()

LogValue = Union[Fraction, _NegInf]

_RATIONAL = re.compile(r"^(-?[1-9][0-9]*|0)(?:/([1-9][0-9]*))?$")


def is_neg_inf(x: object) -> bool:
    return x is NEG_INF


def as_log_value(x) -> LogValue:
    """Coerce ints, Fractions and ``NEG_INF`` to a LogValue; floats are refused."""
    if x is NEG_INF:
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"not an exact value: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return decode_log_value(x)
    raise TypeError(f"not a log value: {x!r}")


def encode_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(text: str) -> Fraction:
    """Parse the canonical encoding: ``"n"`` or ``"n/d"`` with ``d > 1`` and gcd 1."""
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    q = Fraction(num, den)
    if den == 1 or q.numerator != num or q.denominator != den:
        raise ValueError(f"rational {text!r} is not in lowest terms")
    return q


def encode_log_value(x: LogValue) -> str:
    if x is NEG_INF:
        return "-inf"
    return encode_rational(x)


def decode_log_value(text: str) -> LogValue:
    if text == "-inf":
        return NEG_INF
    return decode_rational(text)


def tmax(*values: LogValue) -> LogValue:
    """Tropical sum; ``max`` with ``NEG_INF`` as neutral element."""
    best: LogValue = NEG_INF
    for v in values:
        if v > best:
            best = v
    return best

"""Bit-exact rational strings: ``-?digits(/digits)?``."""

import re
from fractions import Fraction

_RATIONAL = re.compile(r"-?[0-9]+(?:/[0-9]+)?")


def parse_rational(text):
    """Parse a rational string; inputs need not be in lowest terms."""
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise ValueError(f"malformed rational {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q):
    """Lowest terms, ``/`` only when the denominator exceeds 1."""
    return str(Fraction(q))

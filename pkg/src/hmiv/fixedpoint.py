"""Exact decimal arithmetic on integer counts of hundredths.

All decimal quantities in the workbench (pressure values, variable domains,
range annotations) are stored as plain Python ints counting hundredths, so
model checking can rely on exact equality.  1013.25 is stored as 101325.
"""

from __future__ import annotations


class DivisionByZero(ArithmeticError):
    """Raised when a model expression divides by zero."""


def trunc_div(a: int, b: int) -> int:
    """Integer division truncating toward zero (unlike Python's floor //)."""
    if b == 0:
        raise DivisionByZero("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def add(a: int, b: int) -> int:
    return a + b


def sub(a: int, b: int) -> int:
    return a - b


def mul(a: int, b: int) -> int:
    """(a/100) * (b/100) expressed in hundredths, truncated toward zero."""
    return trunc_div(a * b, 100)


def div(a: int, b: int) -> int:
    """(a/100) / (b/100) expressed in hundredths, truncated toward zero."""
    if b == 0:
        raise DivisionByZero("division by zero")
    return trunc_div(100 * a, b)


def half_up(numerator: int, denominator: int) -> int:
    """numerator/denominator rounded half-up to the nearest integer.

    Both operands must be non-negative; unit conversion is the only caller
    and is specified for non-negative values only.
    """
    if numerator < 0 or denominator <= 0:
        raise ValueError("half_up is defined for non-negative ratios")
    return (2 * numerator + denominator) // (2 * denominator)


def parse_literal(text: str) -> int:
    """Parse a decimal literal with at most two fractional digits.

    Returns hundredths.  Raises ValueError on anything else (including a
    third fractional digit, which the document grammar rejects).
    """
    s = text.strip()
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if not s:
        raise ValueError(f"empty decimal literal {text!r}")
    whole, dot, frac = s.partition(".")
    if not whole.isdigit() or (dot and not frac.isdigit()):
        raise ValueError(f"malformed decimal literal {text!r}")
    if len(frac) > 2:
        raise ValueError(f"more than two fractional digits in {text!r}")
    value = int(whole) * 100 + int(frac.ljust(2, "0") or 0)
    return -value if neg else value


def format_value(v: int) -> str:
    """Canonical rendering with exactly two fractional digits: 101321 -> "1013.21"."""
    sign = "-" if v < 0 else ""
    v = abs(v)
    return f"{sign}{v // 100}.{v % 100:02d}"


def to_whole_half_up(v: int) -> int:
    """Round hundredths to the nearest whole unit, half away from zero."""
    if v >= 0:
        return (v + 50) // 100
    return -((-v + 50) // 100)

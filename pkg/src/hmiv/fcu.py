"""Barometer data-entry case study: units, ranges, keypad processing.

The numeric operations here double as the intrinsic function library that
document expressions may call (push_key, entry_value, to_hpa, ...), mirroring
a data-entry device whose transition actions delegate keypad handling to a
shared routine.

Values are integer hundredths throughout (see fixedpoint).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import fixedpoint as fp

INHG = "inHg"
HPA = "hPa"

# 1 inHg = 33.8639 hPa (ICAO standard atmosphere factor), held exactly as a
# rational 338639/10000 so conversions stay in integer arithmetic.
_FACTOR_NUM = 338639
_FACTOR_DEN = 10000

INHG_MIN = 2200      # 22.00
INHG_MAX = 3248      # 32.48
HPA_MIN = 74500      # 745.00
HPA_MAX = 110000     # 1100.00

BUFFER_CAPACITY = 5
BUFFER_ALPHABET = "0123456789."


def valid_range(units: str) -> tuple[int, int]:
    if units == INHG:
        return INHG_MIN, INHG_MAX
    if units == HPA:
        return HPA_MIN, HPA_MAX
    raise ValueError(f"unknown units {units!r}")


def clamp_to_range(v: int, units: str) -> int:
    lo, hi = valid_range(units)
    return min(max(v, lo), hi)


def inhg_to_hpa(v: int) -> int:
    """Convert hundredths of inHg to hundredths of hPa, half-up, clamped."""
    if v < 0:
        raise ValueError("conversion input must be non-negative")
    return clamp_to_range(fp.half_up(v * _FACTOR_NUM, _FACTOR_DEN), HPA)


def hpa_to_inhg(v: int) -> int:
    """Convert hundredths of hPa to hundredths of inHg, half-up, clamped."""
    if v < 0:
        raise ValueError("conversion input must be non-negative")
    return clamp_to_range(fp.half_up(v * _FACTOR_DEN, _FACTOR_NUM), INHG)


# --- entry buffer -----------------------------------------------------------

def buffer_ok(digits: str) -> bool:
    return (len(digits) <= BUFFER_CAPACITY
            and digits.count(".") <= 1
            and all(c in BUFFER_ALPHABET for c in digits))


def push_key(digits: str, key: str) -> str:
    """Append a digit or decimal point, ignoring keystrokes that would
    overflow the buffer or introduce a second decimal point."""
    if key not in BUFFER_ALPHABET or len(key) != 1:
        raise ValueError(f"not a buffer key: {key!r}")
    if len(digits) >= BUFFER_CAPACITY:
        return digits
    if key == "." and "." in digits:
        return digits
    return digits + key


def pop_key(digits: str) -> str:
    """Remove the last character; empty buffers stay empty (the caller
    decides whether an empty-buffer CLR cancels the edit)."""
    return digits[:-1]


def parse_buffer(digits: str, fallback: int) -> int:
    """Value of the buffer in hundredths.

    A buffer with no digits (empty or a lone dot) stands for the fallback
    value.  Fractional digits beyond the second carry no value.  The split
    happens at the first dot so the function stays total even on strings the
    keypad rules would never build.
    """
    if not any(c.isdigit() for c in digits):
        return fallback
    whole, _, frac = digits.partition(".")
    frac = frac.replace(".", "")
    frac = (frac + "00")[:2]
    return int(whole or "0") * 100 + int(frac)


@dataclass(frozen=True)
class KeyOutcome:
    buffer: str
    commit: Optional[int] = None
    cancel: bool = False


def process_key(digits: str, key: str, units: str, pre_edit: int) -> KeyOutcome:
    """Keypad processing for one keystroke against an entry buffer.

    digit / '.'  append when capacity and the single-dot rule allow, else the
                 keystroke is ignored;
    CLR          drop the last character; on an empty buffer, cancel;
    ESC          cancel (the caller restores the pre-edit value);
    ENT          commit clamp(parse(buffer)); an empty buffer commits the
                 pre-edit value unchanged.
    """
    if key in BUFFER_ALPHABET:
        return KeyOutcome(push_key(digits, key))
    if key == "CLR":
        if not digits:
            return KeyOutcome(digits, cancel=True)
        return KeyOutcome(pop_key(digits))
    if key == "ESC":
        return KeyOutcome("", cancel=True)
    if key == "ENT":
        return KeyOutcome("", commit=clamp_to_range(parse_buffer(digits, pre_edit), units))
    raise ValueError(f"unknown key {key!r}")


def render_display(value: int, units: str, mode: str, buffer: Optional[str] = None) -> str:
    """Rendered text of the value display.

    STD replaces the value outright; QNH shows the committed value (whole
    hPa half-up, or inHg with two decimals) plus the unit suffix; the edit
    mode shows the raw buffer with a cursor.
    """
    if mode == "STD":
        return "STD"
    if mode == "EDIT_PRESSURE":
        return (buffer or "") + "_"
    if units == HPA:
        return f"{fp.to_whole_half_up(value)} {HPA}"
    return f"{fp.format_value(value)} {INHG}"

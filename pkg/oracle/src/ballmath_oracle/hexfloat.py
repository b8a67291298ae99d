"""Bit-exact hex-float text form: sign, hex mantissa digits, binary
exponent of the leading bit (0x1.8p+1 is 3).  Mirrors the format used
by the library under audit so vectors round-trip exactly."""

import re
from fractions import Fraction

_HEX_RE = re.compile(
    r"^([+-]?)0x([0-9a-fA-F]+)(?:\.([0-9a-fA-F]*))?(?:p([+-]?\d+))?$")


def parse_hex(s):
    """Hex-float string to an exact Fraction."""
    s = s.strip()
    m = _HEX_RE.match(s)
    if not m:
        raise ValueError("not a hex-float: %r" % s)
    sign = -1 if m.group(1) == "-" else 1
    digits = m.group(2) + (m.group(3) or "")
    man = int(digits, 16)
    e = int(m.group(4) or 0) - 4 * len(m.group(3) or "")
    return sign * Fraction(man, 1) * Fraction(2) ** e


def format_hex(q):
    """Exact Fraction (with power-of-two denominator) to hex-float."""
    if q == 0:
        return "0x0p+0"
    sign = "-" if q < 0 else ""
    num, den = abs(q).numerator, abs(q).denominator
    assert den & (den - 1) == 0, "not dyadic"
    e2 = -(den.bit_length() - 1)
    while num & 1 == 0:
        num >>= 1
        e2 += 1
    L = num.bit_length()
    exp = e2 + L - 1  # exponent of the leading bit
    pad = (-(L - 1)) % 4
    digits = "%x" % (num << pad)
    if len(digits) > 1:
        return "%s0x%s.%sp%+d" % (sign, digits[0], digits[1:], exp)
    return "%s0x%sp%+d" % (sign, digits, exp)

"""
Arbitrary-precision binary floating-point values and balls.

A finite nonzero BigFloat is sign * man * 2^(exp - bitlen(man)) with
the mantissa normalized to have no trailing zero bits, so exp is the
magnitude exponent: 2^(exp-1) <= |x| < 2^exp.  Zero, +/-infinity and
NaN are flagged and carry no mantissa.  Exact addition, subtraction
and multiplication grow the mantissa as needed; rounding is a separate
explicit step.

A Ball is a midpoint/radius pair (y, z) representing [y - z, y + z].
Radii are rounded up to at most 32 mantissa bits, so enclosures only
ever widen.
"""

from __future__ import annotations

import re
from fractions import Fraction

_FINITE = 0
_INF = 1
_NAN = 2

RADIUS_BITS = 32


class BigFloat:
    __slots__ = ("sign", "man", "exp", "kind")

    def __init__(self, sign, man, exp, kind=_FINITE):
        self.sign = sign
        self.man = man
        self.exp = exp
        self.kind = kind

    # --- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return BigFloat(1, 0, 0)

    @staticmethod
    def inf(sign=1):
        return BigFloat(sign, 0, 0, _INF)

    @staticmethod
    def nan():
        return BigFloat(1, 0, 0, _NAN)

    @staticmethod
    def from_man_exp(man, exp2, sign=1):
        """Value sign * man * 2^exp2 with man >= 0 an integer."""
        if man == 0:
            return BigFloat.zero()
        if man < 0:
            sign, man = -sign, -man
        tz = (man & -man).bit_length() - 1
        man >>= tz
        exp2 += tz
        return BigFloat(sign, man, exp2 + man.bit_length())

    @staticmethod
    def from_int(n):
        return BigFloat.from_man_exp(abs(n), 0, 1 if n >= 0 else -1)

    @staticmethod
    def from_float(x):
        import math

        if math.isnan(x):
            return BigFloat.nan()
        if math.isinf(x):
            return BigFloat.inf(1 if x > 0 else -1)
        if x == 0.0:
            return BigFloat.zero()
        m, e = math.frexp(abs(x))
        man = int(m * (1 << 53))
        return BigFloat.from_man_exp(man, e - 53, 1 if x > 0 else -1)

    @staticmethod
    def from_fraction(q, prec, mode="nearest"):
        """Round an exact rational to prec bits."""
        if q == 0:
            return BigFloat.zero()
        q = Fraction(q)
        sign = 1 if q > 0 else -1
        num, den = abs(q.numerator), q.denominator
        # produce prec + 2 quotient bits, then round with a sticky flag
        shift = prec + 2 - (num.bit_length() - den.bit_length())
        if shift >= 0:
            scaled, rem = divmod(num << shift, den)
        else:
            scaled, rem = divmod(num, den << -shift)
        bf = BigFloat.from_man_exp(scaled, -shift, sign)
        return bf.round(prec, mode, sticky=rem != 0)

    # --- predicates ---------------------------------------------------

    def is_zero(self):
        return self.kind == _FINITE and self.man == 0

    def is_finite(self):
        return self.kind == _FINITE

    def is_inf(self):
        return self.kind == _INF

    def is_nan(self):
        return self.kind == _NAN

    def is_special(self):
        return self.kind != _FINITE or self.man == 0

    # --- conversions --------------------------------------------------

    def to_fraction(self):
        assert self.kind == _FINITE
        if self.man == 0:
            return Fraction(0)
        return Fraction(self.sign * self.man,
                        1) * Fraction(2) ** (self.exp - self.man.bit_length())

    def to_float(self):
        import math

        if self.kind == _NAN:
            return float("nan")
        if self.kind == _INF:
            return float("inf") * self.sign
        if self.man == 0:
            return 0.0
        r = self.round(53, "nearest")
        try:
            return math.ldexp(r.sign * r.man, r.exp - r.man.bit_length())
        except OverflowError:
            return float("inf") * self.sign

    # --- exact arithmetic ----------------------------------------------

    def neg(self):
        if self.kind == _FINITE:
            return BigFloat(-self.sign, self.man, self.exp)
        if self.kind == _INF:
            return BigFloat.inf(-self.sign)
        return self

    def abs(self):
        if self.kind == _FINITE:
            return BigFloat(1, self.man, self.exp)
        if self.kind == _INF:
            return BigFloat.inf(1)
        return self

    def add(self, other):
        """Exact sum (mantissa grows as needed)."""
        assert self.kind == _FINITE and other.kind == _FINITE
        if self.man == 0:
            return other
        if other.man == 0:
            return self
        e1 = self.exp - self.man.bit_length()
        e2 = other.exp - other.man.bit_length()
        e = min(e1, e2)
        m = (self.sign * self.man << (e1 - e)) + (other.sign * other.man << (e2 - e))
        return BigFloat.from_man_exp(m, e)

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        assert self.kind == _FINITE and other.kind == _FINITE
        if self.man == 0 or other.man == 0:
            return BigFloat.zero()
        e1 = self.exp - self.man.bit_length()
        e2 = other.exp - other.man.bit_length()
        return BigFloat.from_man_exp(self.man * other.man, e1 + e2,
                                     self.sign * other.sign)

    def mul_pow2(self, k):
        if self.is_special():
            return self
        return BigFloat(self.sign, self.man, self.exp + k)

    def cmp_abs(self, other):
        """-1, 0, 1 comparison of magnitudes (finite values)."""
        if self.man == 0 or other.man == 0:
            a = self.man != 0
            b = other.man != 0
            return (a > b) - (a < b)
        if self.exp != other.exp:
            return 1 if self.exp > other.exp else -1
        l1, l2 = self.man.bit_length(), other.man.bit_length()
        w = max(l1, l2)
        m1, m2 = self.man << (w - l1), other.man << (w - l2)
        return (m1 > m2) - (m1 < m2)

    # --- rounding -------------------------------------------------------

    def round(self, prec, mode="nearest", sticky=False):
        """Round to prec mantissa bits.

        mode: "nearest" (ties to even), "down" (toward zero), "up"
        (away from zero), "floor", "ceil".  sticky marks that the value
        is already a truncation of something strictly larger in
        magnitude (used when rounding rationals).
        """
        if self.is_special():
            return self
        L = self.man.bit_length()
        if L <= prec and not sticky:
            return self
        drop = max(L - prec, 0)
        head, tail = self.man >> drop, self.man & ((1 << drop) - 1)
        inexact = tail != 0 or sticky
        if not inexact:
            return self
        if mode == "floor":
            mode = "down" if self.sign > 0 else "up"
        elif mode == "ceil":
            mode = "up" if self.sign > 0 else "down"
        if mode == "up":
            head += 1
        elif mode == "nearest":
            if drop:
                half = 1 << (drop - 1)
                if tail > half or (tail == half and (sticky or head & 1)):
                    head += 1
        elif mode != "down":
            raise ValueError(mode)
        return BigFloat.from_man_exp(head, self.exp - L + drop, self.sign)

    def round_error(self, rounded):
        """|self - rounded| as an exact BigFloat."""
        return self.sub(rounded).abs()

    # --- formatting -----------------------------------------------------

    def hex_str(self):
        if self.kind == _NAN:
            return "nan"
        if self.kind == _INF:
            return "+inf" if self.sign > 0 else "-inf"
        if self.man == 0:
            return "0x0p+0"
        L = self.man.bit_length()
        pad = (-(L - 1)) % 4
        m = self.man << pad
        digits = "%x" % m
        e = self.exp - 1
        s = "-" if self.sign < 0 else ""
        if len(digits) > 1:
            return "%s0x%s.%sp%+d" % (s, digits[0], digits[1:], e)
        return "%s0x%sp%+d" % (s, digits[0], e)

    def decimal_str(self, sig_digits):
        if self.is_special() or self.man == 0:
            return self.hex_str() if self.kind != _FINITE else "0"
        q = self.to_fraction()
        e10 = 0
        aq = abs(q)
        while aq >= 10:
            aq /= 10
            e10 += 1
        while aq < 1:
            aq *= 10
            e10 -= 1
        scaled = abs(q) * Fraction(10) ** (sig_digits - 1 - e10)
        digits = int(scaled + Fraction(1, 2))
        ds = str(digits)
        if len(ds) > sig_digits:  # carry out of the leading digit
            e10 += 1
            ds = ds[:-1]
        s = "-" if self.sign < 0 else ""
        return "%s%s.%se%+d" % (s, ds[0], ds[1:] or "0", e10)

    def __repr__(self):
        return "BigFloat(%s)" % self.hex_str()

    def __eq__(self, other):
        if not isinstance(other, BigFloat):
            return NotImplemented
        return (self.kind, self.sign, self.man, self.exp) == \
            (other.kind, other.sign, other.man, other.exp) or \
            (self.is_zero() and other.is_zero())

    def __hash__(self):
        if self.is_zero():
            return hash(0)
        return hash((self.kind, self.sign, self.man, self.exp))


_HEX_RE = re.compile(
    r"^([+-]?)0x([0-9a-fA-F]+)(?:\.([0-9a-fA-F]*))?(?:p([+-]?\d+))?$")


def parse_number(s, prec=4608):
    """Parse a hex-float (0x1.5bp+3) exactly or a decimal string rounded
    to nearest at prec bits."""
    s = s.strip()
    low = s.lower()
    if low in ("inf", "+inf"):
        return BigFloat.inf(1)
    if low == "-inf":
        return BigFloat.inf(-1)
    if low == "nan":
        return BigFloat.nan()
    m = _HEX_RE.match(s)
    if m:
        sign = -1 if m.group(1) == "-" else 1
        ip = m.group(2)
        fp = m.group(3) or ""
        e = int(m.group(4) or 0)
        man = int(ip + fp, 16)
        return BigFloat.from_man_exp(man, e - 4 * len(fp), sign)
    try:
        q = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError("cannot parse number: %r" % s)
    return BigFloat.from_fraction(q, prec, "nearest")


class Ball:
    """Midpoint/radius enclosure [mid - rad, mid + rad]."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad):
        assert rad.kind == _FINITE and rad.sign > 0 or rad.is_zero()
        self.mid = mid
        self.rad = rad.round(RADIUS_BITS, "up")

    def lower(self):
        return self.mid.to_fraction() - self.rad.to_fraction()

    def upper(self):
        return self.mid.to_fraction() + self.rad.to_fraction()

    def contains(self, q):
        """Exact containment test for a Fraction."""
        return self.lower() <= q <= self.upper()

    def intersects(self, other):
        return self.lower() <= other.upper() and other.lower() <= self.upper()

    def width(self):
        return 2 * self.rad.to_fraction()

    def __repr__(self):
        return "Ball(%s +/- %s)" % (self.mid.hex_str(), self.rad.hex_str())

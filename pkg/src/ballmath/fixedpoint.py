"""
Fixed-point arithmetic on limb arrays.

A value is stored as an unsigned integer ``val`` interpreted at scale
2^(-B*nfrac), where B is the limb width in bits (32 or 64).  This is
exactly the little-endian base-2^B limb array of a multiprecision
integer, so ``val`` *is* the limb array; the ``limbs`` property exposes
the individual words.  With nint = 0 a number lies in [0, 1 - ulp],
with nint = 1 in [0, 2^B - ulp], where ulp = 2^(-B*nfrac).

All rounding is truncation (toward zero; values are nonnegative), so
every rounding site adds at most 1 ulp of one-sided error.  Negative
quantities appear only transiently inside the series kernels, stored as
two's complement, and are never passed to multiplication or division.

Error propagation for values X, Y carrying errors e1, e2 (in ulp):

    add/sub:        e1 + e2          (plus nothing; the operation is exact)
    mul by limb c:  e1 * c           (exact full-width product)
    full mul:       |Y|*e1 + |X|*e2 + e1*e2*ulp + 1
    div by limb c:  e1 / c + 1
"""

from __future__ import annotations

DEFAULT_LIMB_BITS = 64


class FixedPoint:
    """An unsigned fixed-point number: ``val * 2^(-bits*nfrac)``."""

    __slots__ = ("val", "nfrac", "nint", "bits")

    def __init__(self, val, nfrac, nint=0, bits=DEFAULT_LIMB_BITS):
        assert val >= 0
        self.val = val
        self.nfrac = nfrac
        self.nint = nint
        self.bits = bits

    @property
    def width(self):
        """Total width in bits (fractional plus integral limbs)."""
        return self.bits * (self.nfrac + self.nint)

    @property
    def limbs(self):
        """Little-endian tuple of B-bit words."""
        mask = (1 << self.bits) - 1
        v = self.val
        out = []
        for _ in range(self.nfrac + self.nint):
            out.append(v & mask)
            v >>= self.bits
        return tuple(out)

    def to_fraction(self):
        from fractions import Fraction

        return Fraction(self.val, 1 << (self.bits * self.nfrac))

    def is_canonical(self):
        return 0 <= self.val < (1 << self.width)

    def __repr__(self):
        return "FixedPoint(%#x, nfrac=%d, nint=%d, bits=%d)" % (
            self.val, self.nfrac, self.nint, self.bits)

    def __eq__(self, other):
        return (isinstance(other, FixedPoint) and self.val == other.val
                and self.nfrac == other.nfrac and self.nint == other.nint
                and self.bits == other.bits)

    def __hash__(self):
        return hash((self.val, self.nfrac, self.nint, self.bits))


def fx_zero(nfrac, nint=0, bits=DEFAULT_LIMB_BITS):
    return FixedPoint(0, nfrac, nint, bits)


def fx_from_fraction(q, nfrac, nint=0, bits=DEFAULT_LIMB_BITS):
    """Truncate a nonnegative rational to a fixed-point number (<= 1 ulp)."""
    assert q >= 0
    val = (q.numerator << (bits * nfrac)) // q.denominator
    assert val < (1 << (bits * (nfrac + nint)))
    return FixedPoint(val, nfrac, nint, bits)


def _check_compatible(x, y):
    assert x.bits == y.bits and x.nfrac == y.nfrac
    assert x.nint >= y.nint


def fx_add(x, y):
    """x + y modulo the width of x.  Returns (sum, carry).

    y must have the same limb count as x, or one limb fewer (the carry
    then propagates into x's extra integral limb).  Exact.
    """
    _check_compatible(x, y)
    s = x.val + y.val
    w = 1 << x.width
    return FixedPoint(s & (w - 1), x.nfrac, x.nint, x.bits), s >> x.width


def fx_sub(x, y):
    """x - y modulo the width of x.  Returns (difference, borrow).

    With borrow = 1 the result is the two's complement of the negative
    difference.  Exact.
    """
    _check_compatible(x, y)
    d = x.val - y.val
    w = 1 << x.width
    return FixedPoint(d & (w - 1), x.nfrac, x.nint, x.bits), 1 if d < 0 else 0


def fx_mul_limb(y, c, mode="set", acc=None):
    """y*c, acc + y*c or acc - y*c at full width.  Returns (result, carry limb).

    c is an exact single-limb integer; the product is exact, so an input
    error e on y becomes e*c on the result.  The result keeps y's (or
    acc's) limb count; the overflowing top limb is returned separately
    (for mode "sub" it is the borrowed amount, GMP style).
    """
    assert 0 <= c < (1 << y.bits)
    if mode == "set":
        raw = y.val * c
        base = y
    elif mode == "add":
        raw = acc.val + y.val * c
        base = acc
    elif mode == "sub":
        raw = acc.val - y.val * c
        base = acc
    else:
        raise ValueError(mode)
    w = base.width
    lo = raw & ((1 << w) - 1)
    carry = (raw - lo) >> w
    if mode == "sub":
        carry = -carry  # borrowed amount, nonnegative
    return FixedPoint(lo, base.nfrac, base.nint, base.bits), carry


def fx_mul(y, z):
    """Truncating product: the low z.nfrac limbs of the full product are
    discarded, adding less than 1 ulp.  Operands must be canonical
    nonnegative; the caller guarantees the result fits."""
    assert y.bits == z.bits and y.nfrac == z.nfrac
    n = y.nfrac
    val = (y.val * z.val) >> (y.bits * n)
    nint = y.nint + z.nint
    assert val < (1 << (y.bits * (n + nint)))
    return FixedPoint(val, n, nint, y.bits)


def fx_div_limb(y, c):
    """Truncating quotient y/c for a single-limb integer c >= 1."""
    assert 0 < c < (1 << y.bits)
    return FixedPoint(y.val // c, y.nfrac, y.nint, y.bits)


def fx_div(num, den):
    """Truncating full division num/den; the quotient must be < 1.

    Used by the argument-reduction steps whose divisors are full-width
    fixed-point numbers.  Adds less than 1 ulp.
    """
    assert num.bits == den.bits and num.nfrac == den.nfrac
    assert den.val > 0
    n = num.nfrac
    val = (num.val << (num.bits * n)) // den.val
    assert val < (1 << (num.bits * n)), "quotient must be a pure fraction"
    return FixedPoint(val, n, 0, num.bits)


def fx_sqrt(y):
    """Floor square root; the result is within 2 ulp of sqrt(y).

    y must be canonical nonnegative with value below 4.  Since the
    underlying integer square root is exact, the actual error is below
    1 ulp; the documented bound keeps a margin.
    """
    import math

    n = y.nfrac
    assert y.val < (4 << (y.bits * n))
    val = math.isqrt(y.val << (y.bits * n))
    return FixedPoint(val, n, 1 if val >> (y.bits * n) else 0, y.bits)


def fx_leading_zeros(y):
    """Number of zero bits between the binary point and the top set bit
    of the fractional part (= r such that y < 2^-r, capped at the full
    fractional width).  y must have no integral part."""
    assert y.val < (1 << (y.bits * y.nfrac))
    if y.val == 0:
        return y.bits * y.nfrac
    return y.bits * y.nfrac - y.val.bit_length()

"""
Top-level evaluation: atan, exp, log, sin, cos on BigFloat inputs,
returning Balls.

Shared structure per call: pick a working bit precision w (p plus guard
bits plus function-specific exponent compensation), reduce the argument
into [0, 2^-r1) and then [0, 2^-(r1+r2)) with one or two table lookups
(band r1 = 8 for w <= 512, else r1 = r2 = 5), run a series kernel on
the residual, and reassemble.  Every rounding site adds an integer
number of ulps (at 2^-(B*n)) to a running counter Z; the returned
radius is the series tail bound plus Z ulps, then the midpoint is
rounded to p bits with that rounding error folded into the radius.

Guard-bit policy:

    atan      w = p - min(0, e) + 4          (counter Z stays <= 9, so
                                              z <= 10 * 2^-w pre-rounding)
    exp       w = p + 12                      (+8 guard for the table
                                              multiplies; Z <= ~60)
    log       w = p + 12 + cancellation       (cancellation = leading
                                              zeros of x - 1 when x is
                                              within [0.5, 2))
    sin/cos   w = p - min(0, e) + 12          (absolute 2^-p tolerance
                                              for large x)

Above 320 working bits the cosine residual is derived from the sine
series as sqrt(1 - sin^2) (well conditioned, the residual being near 0
means the root is near 1); above 832 bits exp's residual is derived
from the sinh series as sinh + sqrt(1 + sinh^2).
"""

from __future__ import annotations

import math
import os

from . import argtables
from .argtables import BAND_PRECISION, CONSTANT_PRECISION, ECONOMICAL, FAST, lookup
from .bigfloat import Ball, BigFloat
from .errors import (DomainError, InvalidInput, UnsupportedArgument,
                     UnsupportedPrecision)
from .fixedpoint import FixedPoint
from .series import (FACTORIAL, ODD, denom_table, eval_atan_series,
                     eval_atanh_series, eval_exp_series, eval_sin_cos_series,
                     eval_sinh_series)

#: build-time limb size selection (the denominator tables differ per size)
LIMB_BITS = int(os.environ.get("BALLMATH_LIMB_BITS", "64"))
assert LIMB_BITS in (32, 64)

MAX_WORK_BITS = 4608

_COS_FROM_SIN_BITS = 320
_EXP_FROM_SINH_BITS = 832
_EXP_MAX_EXPONENT = 24


def _nlimbs(w):
    return -(-w // LIMB_BITS)


def _bf_from_fixed(val, n, sign=1):
    return BigFloat.from_man_exp(val, -LIMB_BITS * n, sign)


def _radius(tail_exp2, Z, n):
    """2^tail_exp2 + Z * 2^(-B*n), exactly."""
    scale = min(tail_exp2, -LIMB_BITS * n)
    man = (1 << (tail_exp2 - scale)) + (Z << (-LIMB_BITS * n - scale))
    return BigFloat.from_man_exp(man, scale)


def _finish(y_raw, z_raw, p):
    """Public output: round the midpoint to p bits, fold the rounding
    error into the radius (the Ball constructor rounds it up to a
    32-bit mantissa)."""
    y = y_raw.round(p, "nearest")
    return Ball(y, z_raw.add(y_raw.round_error(y)))


def _prefer(main, mid_exact, rad_bound, p):
    """Tighter of the computed ball and a closed-form small-argument
    enclosure (mid_exact, rad_bound); keeps ball widths monotone in p
    across special-case branch boundaries."""
    mid = mid_exact.round(p, "nearest")
    small = Ball(mid, rad_bound.add(mid_exact.round_error(mid)))
    return small if small.rad.cmp_abs(main.rad) < 0 else main


def _trunc_fraction(x, n):
    """|x| < 1 as a raw fixed-point value; returns (val, err_ulps)."""
    man, shift = x.man, LIMB_BITS * n + x.exp - x.man.bit_length()
    if shift >= 0:
        return man << shift, 0
    dropped = man & ((1 << -shift) - 1)
    return man >> -shift, (1 if dropped else 0)


def _trunc_recip(x, n):
    """1/|x| for |x| > 1, truncated; returns (val, err_ulps)."""
    L = x.man.bit_length()
    num = 1 << (LIMB_BITS * n + L - x.exp)
    val, rem = divmod(num, x.man)
    return val, (1 if rem else 0)


def _const_scaled(name, wbits):
    """Stored constant as an integer at scale 2^-wbits (truncated)."""
    if wbits > CONSTANT_PRECISION:
        raise UnsupportedPrecision("constant %s is stored to %d bits"
                                   % (name, CONSTANT_PRECISION))
    man, exp = argtables.load_constants()[name]
    shift = CONSTANT_PRECISION - exp - wbits
    return man >> shift if shift >= 0 else man << -shift


def get_constant(which, w):
    """pi/4, pi/2 or log2 truncated to ceil(w/B) limbs (<= 1 ulp)."""
    if which not in ("pi/4", "pi/2", "log2"):
        raise ValueError(which)
    if w > CONSTANT_PRECISION:
        raise UnsupportedPrecision("constants are stored to %d bits"
                                   % CONSTANT_PRECISION)
    n = _nlimbs(w)
    nint = 1 if which == "pi/2" else 0
    return FixedPoint(_const_scaled(which, LIMB_BITS * n), n, nint, LIMB_BITS)


def _band(w):
    return FAST if w <= 512 else ECONOMICAL


def _reduction_bits(w):
    return (8, 0) if w <= 512 else (5, 5)


def _lzc(val, n):
    """Leading zero bits of an n-limb fraction."""
    width = LIMB_BITS * n
    return width if val == 0 else width - val.bit_length()


def _atan_terms(r, w):
    return -(-(w - r) // (2 * r))


def _log2_fact(k, _cache={}):
    if k not in _cache:
        import math

        _cache[k] = math.factorial(k).bit_length() - 1
    return _cache[k]


def _exp_terms(r, w):
    N = 1
    while r * N + _log2_fact(N) < w + 1:
        N += 1
    return N


def _sin_cos_terms(r, w):
    # the cos tail X^(2N)/(2N)! dominates the sin tail at equal N
    N = 1
    while 2 * r * N + _log2_fact(2 * N) < w:
        N += 1
    return N


# ---------------------------------------------------------------------------
# atan
# ---------------------------------------------------------------------------

def atan_ball(x, p, raw=False):
    """Enclosure of atan(x) at precision p >= 2.

    raw=True skips the final rounding of the midpoint to p bits (the
    pre-rounding midpoint carries the full working precision, which a
    caller implementing a stricter rounding policy needs to see).
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if x.is_nan():
        raise InvalidInput("atan of NaN")
    if x.is_zero():
        out = (BigFloat.zero(), BigFloat.zero())
        return out if raw else Ball(*out)
    w0 = p + 4
    if x.is_inf():
        n = _nlimbs(w0)
        y = _bf_from_fixed(_const_scaled("pi/2", LIMB_BITS * n), n, x.sign)
        out = (y, _radius(-w0, 0, n))
        return out if raw else _finish(out[0], out[1], p)
    e = x.exp
    if 2 * e < -p - 4:
        # atan(x) = x + O(x^3)
        out = (x, BigFloat.from_man_exp(1, 3 * e))
        return out if raw else _finish(out[0], out[1], p)
    if e > p + 2:
        # atan(x) = sign * pi/2 + O(1/x)
        n = _nlimbs(w0)
        y = _bf_from_fixed(_const_scaled("pi/2", LIMB_BITS * n), n, x.sign)
        z = BigFloat.from_man_exp(1, 1 - e).add(_radius(-w0, 0, n))
        out = (y, z)
        return out if raw else _finish(out[0], out[1], p)
    if x.man == 1 and x.exp == 1:  # |x| = 1
        n = _nlimbs(w0)
        y = _bf_from_fixed(_const_scaled("pi/4", LIMB_BITS * n), n, x.sign)
        out = (y, _radius(-w0, 0, n))
        return out if raw else _finish(out[0], out[1], p)

    w = p - min(0, e) + 4
    if w > MAX_WORK_BITS:
        raise UnsupportedPrecision("working precision %d > %d" %
                                   (w, MAX_WORK_BITS))
    n = _nlimbs(w)
    width = LIMB_BITS * n
    over_one = e >= 1
    if over_one:
        X, err = _trunc_recip(x, n)
    else:
        X, err = _trunc_fraction(x, n)
    Z = 1  # one charged ulp covers the (possibly exact) conversion
    r1, r2 = _reduction_bits(w)
    band = _band(w)
    table = argtables.get_table("atan", band)

    p1 = X >> (width - r1)
    if p1:
        num = (X << r1) & ((1 << width) - 1)
        den = (1 << (r1 + width)) + p1 * X
        X = (num << width) // den
        Z += 1
    p2 = 0
    if r2:
        p2 = X >> (width - r1 - r2)
        if p2:
            num = (X << (r1 + r2)) & ((1 << width) - 1)
            den = (1 << (r1 + r2 + width)) + p2 * X
            X = (num << width) // den
            Z += 1

    r = min(max(_lzc(X, n), r1 + r2), width)
    N = max(_atan_terms(r, w), 0)
    if N > 2:
        Y = eval_atan_series(FixedPoint(X, n, 0, LIMB_BITS), N,
                             denom_table(ODD, LIMB_BITS)).val
        Z += 2
    elif N > 0:
        Y = X
        if N == 2:
            x3 = (((X * X) >> width) * X) >> width
            Y = X - x3 // 3
        Z += 3
    else:
        Y = 0
    if p1:
        Y += lookup(table, 1, p1, w, LIMB_BITS).val
        Z += 1
    if p2:
        Y += lookup(table, 2, p2, w, LIMB_BITS).val
        Z += 1
    if over_one:
        Y = _const_scaled("pi/2", width) - Y
        Z += 1
    y = _bf_from_fixed(Y, n, x.sign)
    z = _radius(-r * (2 * N + 1), Z, n)
    if raw:
        return (y, z)
    ball = _finish(y, z, p)
    if e <= 0:
        # atan(x) = x + O(x^3) holds for every |x| < 1
        ball = _prefer(ball, x, BigFloat.from_man_exp(1, 3 * e), p)
    return ball


# ---------------------------------------------------------------------------
# exp
# ---------------------------------------------------------------------------

def exp_ball(x, p, raw=False):
    """Enclosure of exp(x) at precision p >= 2."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if x.is_nan():
        raise InvalidInput("exp of NaN")
    if x.is_inf():
        if x.sign > 0:
            raise UnsupportedArgument("exp(+inf) has no finite enclosure")
        return Ball(BigFloat.zero(), BigFloat.zero())
    if x.is_zero():
        return Ball(BigFloat.from_int(1), BigFloat.zero())
    if x.exp > _EXP_MAX_EXPONENT:
        raise UnsupportedArgument("|x| >= 2^%d exceeds the stored log 2 "
                                  "budget" % _EXP_MAX_EXPONENT)
    w = p + 12
    if w > MAX_WORK_BITS:
        raise UnsupportedPrecision("working precision %d > %d" %
                                   (w, MAX_WORK_BITS))
    n = _nlimbs(w)
    width = LIMB_BITS * n

    # m = floor(x / log 2), t = x - m log 2 in [0, log 2)
    wc = width + max(x.exp, 0) + 8
    L = _const_scaled("log2", wc)
    shift = wc + x.exp - x.man.bit_length()
    xs = x.man << shift if shift >= 0 else x.man >> -shift
    if x.sign < 0:
        xs = -xs
    m, trem = divmod(xs, L)
    T = trem >> (wc - width)
    # the wc-scale reduction error (|m|+1 truncations of log 2) stays
    # below 2^(-w-5) absolutely and is covered by the 2^(-w+2) tail
    # term; only the truncation to `width` bits costs a whole ulp here
    Z = 1

    r1, r2 = _reduction_bits(w)
    band = _band(w)
    table = argtables.get_table("exp", band)
    i1 = T >> (width - r1)
    X = T - (i1 << (width - r1))
    i2 = 0
    if r2:
        i2 = X >> (width - r1 - r2)
        X -= i2 << (width - r1 - r2)

    r = min(max(_lzc(X, n), r1 + r2), width)
    ftab = denom_table(FACTORIAL, LIMB_BITS)
    one = 1 << width
    if X == 0:
        E, eE = one, 0
    else:
        N = _exp_terms(r, w)
        if N <= 2:
            E = one + X + (((X * X) >> width) // 2 if N == 2 else 0)
            eE = 3
        elif w >= _EXP_FROM_SINH_BITS:
            sh = eval_sinh_series(FixedPoint(X, n, 0, LIMB_BITS), N, ftab).val
            sq = one + ((sh * sh) >> width)
            root = math.isqrt(sq << width)
            E = sh + root
            eE = 7  # sinh 3, square 2, root 2 (magnitudes near 1)
        else:
            E = eval_exp_series(FixedPoint(X, n, 0, LIMB_BITS), N, ftab).val
            eE = 3
    Z += eE
    for idx, which in ((i1, 1), (i2, 2)):
        if idx:
            entry = lookup(table, which, idx, w, LIMB_BITS).val
            E = (E * entry) >> width
            # |entry| < 2, |E| < 2: err <= 2 Z_E + 2*1 + 1
            Z = 2 * Z + 3
    y = _bf_from_fixed(E, n).mul_pow2(int(m))
    z = _radius(-w + 2, Z, n).mul_pow2(int(m))
    return (y, z) if raw else _finish(y, z, p)


# ---------------------------------------------------------------------------
# log
# ---------------------------------------------------------------------------

def log_ball(x, p, raw=False):
    """Enclosure of log(x) at precision p >= 2, x > 0."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if x.is_nan():
        raise InvalidInput("log of NaN")
    if x.is_inf():
        raise UnsupportedArgument("log(+/-inf) has no finite enclosure")
    if x.is_zero() or x.sign < 0:
        raise DomainError("log requires x > 0")
    if x.man == 1 and x.exp == 1:  # x = 1
        return Ball(BigFloat.zero(), BigFloat.zero())
    e = x.exp
    cancel = 0
    if e in (0, 1):
        d = x.sub(BigFloat.from_int(1))  # exact
        if d.exp < -p - 2:
            # log(1 + d) = d + O(d^2)
            out = (d, BigFloat.from_man_exp(1, 2 * d.exp))
            return out if raw else _finish(out[0], out[1], p)
        cancel = max(0, 1 - d.exp)
    w = p + 12 + cancel
    if w > MAX_WORK_BITS:
        raise UnsupportedPrecision("working precision %d > %d" %
                                   (w, MAX_WORK_BITS))
    n = _nlimbs(w)
    width = LIMB_BITS * n

    # x = a * 2^(e-1) with a in [1, 2); s = a - 1 in [0, 1)
    a_minus_1 = BigFloat.from_man_exp(
        x.man - (1 << (x.man.bit_length() - 1)), 1 - x.man.bit_length())
    S, err = _trunc_fraction(a_minus_1, n) if not a_minus_1.is_zero() else (0, 0)
    Z = 1
    r1, r2 = (7, 7) if w <= 512 else (5, 5)
    band = _band(w)
    table = argtables.get_table("log", band)

    err_s = Z  # running error of the reduced fraction, in ulps
    Z = 0
    i1 = S >> (width - r1)
    Y = 0
    if i1:
        num = (S << r1) & ((1 << width) - 1)
        S = num // ((1 << r1) + i1)  # (n x 1)-word division
        Y += lookup(table, 1, i1, w, LIMB_BITS).val
        Z += 1
        err_s += 1  # the reduction map contracts; one truncation
    i2 = S >> (width - r1 - r2)
    if i2:
        num = (S << (r1 + r2)) & ((1 << width) - 1)
        S = num // ((1 << (r1 + r2)) + i2)
        Y += lookup(table, 2, i2, w, LIMB_BITS).val
        Z += 1
        err_s += 1

    # log(1 + s) = 2 atanh(s / (2 + s))
    if S:
        den = (2 << width) + S
        V = (S << width) // den
        err_v = err_s // 2 + 2  # d/ds s/(2+s) <= 1/2, plus the truncation
        r = min(max(_lzc(V, n), r1 + r2 + 1), width)
        N = max(_atan_terms(r, w) + 1, 0)
        if N > 2:
            A = eval_atanh_series(FixedPoint(V, n, 0, LIMB_BITS), N,
                                  denom_table(ODD, LIMB_BITS)).val
            err_a = err_v + 2
        elif N > 0:
            A = V
            if N == 2:
                v3 = (((V * V) >> width) * V) >> width
                A = V + v3 // 3
            err_a = err_v + 3
        else:
            A = 0
            err_a = err_v
        Y += 2 * A
        Z += 2 * err_a  # the doubling scales the whole atanh error

    # total = (e - 1) * log2 + log(1 + s), in scale 2^-wc
    if e != 1:
        eb = (e - 1 if e > 1 else 2 - e).bit_length()
        wc = width + eb + 4
        L = _const_scaled("log2", wc)
        total = (e - 1) * L + (Y << (wc - width))
        # the (e-1)-scaled log2 truncation stays below 2^(-w-4) and is
        # covered by the 2^(-w+2) tail term
        y = BigFloat.from_man_exp(total, -wc)
    else:
        y = _bf_from_fixed(Y, n)
    z = _radius(-w + 2, Z, n)
    return (y, z) if raw else _finish(y, z, p)


# ---------------------------------------------------------------------------
# sin / cos
# ---------------------------------------------------------------------------

def sin_cos_ball(x, p, want="both", raw=False):
    """Enclosures of sin(x) and cos(x) at precision p >= 2.

    Returns (sin_ball, cos_ball); the unwanted slot is None when want
    is "sin" or "cos".  For large |x| the tolerance is absolute (2^-p),
    so accuracy degrades near the roots; tiny |x| short-circuits to
    (x, x^3) / (1, x^2/2) style enclosures.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if x.is_nan() or x.is_inf():
        raise InvalidInput("sin/cos of NaN or infinity")
    if x.is_zero():
        sb = Ball(BigFloat.zero(), BigFloat.zero())
        cb = Ball(BigFloat.from_int(1), BigFloat.zero())
        return _want(sb, cb, want)
    e = x.exp
    if 2 * e < -p - 4:
        sb = (x, BigFloat.from_man_exp(1, 3 * e))
        cb = (BigFloat.from_int(1), BigFloat.from_man_exp(1, 2 * e - 1))
        if raw:
            return _want(sb, cb, want)
        return _want(_finish(sb[0], sb[1], p), _finish(cb[0], cb[1], p), want)
    w = p - min(0, e) + 12
    if w > MAX_WORK_BITS:
        raise UnsupportedPrecision("working precision %d > %d" %
                                   (w, MAX_WORK_BITS))
    wc = LIMB_BITS * _nlimbs(w) + max(e, 0) + 8
    if wc > CONSTANT_PRECISION:
        # beyond the stored pi/4 budget: the whole range is still a
        # valid enclosure for both outputs
        whole = Ball(BigFloat.zero(),
                     BigFloat.from_man_exp((1 << 20) + 1, -20))
        return _want(whole, whole, want)
    n = _nlimbs(w)
    width = LIMB_BITS * n

    P4 = _const_scaled("pi/4", wc)
    shift = wc + x.exp - x.man.bit_length()
    xs = x.man << shift if shift >= 0 else x.man >> -shift
    q, trem = divmod(xs, P4)
    octant = q & 7
    tw = (P4 - trem) if octant & 1 else trem
    T = tw >> (wc - width)
    # the wc-scale reduction error ((q+1) truncations of pi/4) stays
    # below 2^(-w-7) absolutely; 1 ulp covers the width truncation
    Zs = Zc = 1

    sign_sin = 1 if octant < 4 else -1
    sign_cos = 1 if octant in (0, 1, 6, 7) else -1
    swap = octant in (1, 2, 5, 6)

    r1, r2 = _reduction_bits(w)
    band = _band(w)
    sin_table = argtables.get_table("sin", band)
    cos_table = argtables.get_table("cos", band)

    steps = []
    i1 = T >> (width - r1)
    X = T - (i1 << (width - r1))
    if i1:
        steps.append((1, i1))
    if r2:
        i2 = X >> (width - r1 - r2)
        X -= i2 << (width - r1 - r2)
        if i2:
            steps.append((2, i2))

    r = min(max(_lzc(X, n), r1 + r2), width)
    ftab = denom_table(FACTORIAL, LIMB_BITS)
    one = 1 << width
    if X == 0:
        SX, CX, eS, eC = 0, one, 0, 0
    else:
        N = _sin_cos_terms(r, w)
        if N <= 2:
            x2 = (X * X) >> width
            SX = X - ((x2 * X) >> width) // 6
            CX = one - x2 // 2
            eS = eC = 3
        elif w >= _COS_FROM_SIN_BITS:
            SX = eval_sin_cos_series(FixedPoint(X, n, 0, LIMB_BITS), N, ftab,
                                     want="sin")[0].val
            CX = math.isqrt((one - ((SX * SX) >> width)) << width)
            eS, eC = 3, 5
        else:
            sfx, cfx = eval_sin_cos_series(FixedPoint(X, n, 0, LIMB_BITS), N,
                                           ftab, want="both")
            SX, CX = sfx.val, cfx.val
            eS = eC = 3
    Zs += eS
    Zc += eC
    for which, idx in steps:
        si = lookup(sin_table, which, idx, w, LIMB_BITS).val
        ci = lookup(cos_table, which, idx, w, LIMB_BITS).val
        s_new = (SX * ci + CX * si) >> width
        c_new = (CX * ci - SX * si) >> width
        assert c_new >= 0
        SX, CX = s_new, c_new
        # each output: two lookups at 1 ulp, two truncations, inputs
        Zs, Zc = Zs + Zc + 4, Zs + Zc + 4
    if swap:
        SX, CX = CX, SX
        Zs, Zc = Zc, Zs
    ys = _bf_from_fixed(SX, n, x.sign * sign_sin)
    yc = _bf_from_fixed(CX, n, sign_cos)
    zs = _radius(-w + 2, Zs, n)
    zc = _radius(-w + 2, Zc, n)
    if raw:
        return _want((ys, zs), (yc, zc), want)
    sb = _finish(ys, zs, p)
    cb = _finish(yc, zc, p)
    if e <= 0:
        # the small-argument enclosures (x, x^3-bound) / (1, x^2/2-bound)
        # hold for any |x| < 1; keep whichever ball is tighter so widths
        # stay monotone in p across the branch boundary
        sb = _prefer(sb, x, BigFloat.from_man_exp(1, 3 * e), p)
        cb = _prefer(cb, BigFloat.from_int(1),
                     BigFloat.from_man_exp(1, 2 * e - 1), p)
    return _want(sb, cb, want)


def _want(sb, cb, want):
    if want == "sin":
        return sb, None
    if want == "cos":
        return None, cb
    if want == "both":
        return sb, cb
    raise ValueError(want)


def sin_ball(x, p):
    return sin_cos_ball(x, p, want="sin")[0]


def cos_ball(x, p):
    return sin_cos_ball(x, p, want="cos")[1]

"""
Taylor-series kernels using rectangular splitting with shared
single-limb denominators.

Each kernel sums a truncated series for an n-limb fixed-point argument
0 <= X <= 2^-4, returning a result within 2 ulp of the exact truncated
sum.  A degree-N polynomial costs about 2*sqrt(N) full (n x n)-limb
multiplications: the powers T_1..T_m (m = 2*ceil(sqrt(N)/2), always
even) are tabulated once, rows of m coefficients are accumulated with
single-limb operations, and Horner steps in T_m glue the rows together.

Per-term divisions are avoided by tabulating integers u_k, v_k < 2^B
with u_k/v_k equal to the k-th coefficient rescaled so that blocks of
consecutive terms share the denominator v_k.  The running sum S is kept
multiplied by the current block's denominator, so a division is needed
only when crossing a block boundary (at most every third term on
32-bit limbs, every seventh on 64-bit).

For the alternating series, S is a two's-complement negative whenever
the most recently added term had odd index.  A negative S cannot be fed
to the denominator-change multiply/divide directly; instead we shift it
into nonnegative range first and undo the shift afterwards:

    ((S + v_old) * v_new) / v_old - v_new     (odd-denominator tables)
    ((S + v_old)        ) / v_old - 1         (factorial tables)

which costs two extra single-limb additions.  The branch is taken on
the actual sign bit of S, which is exactly the condition under which
the value is a two's-complement negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fixedpoint import FixedPoint

ODD = "odd"
FACTORIAL = "factorial"

#: Series kinds.  ATAN/ATANH use the odd tables, EXP/SIN/COS/SINH the
#: factorial tables.  SINH is the positive-term sibling of SIN used by
#: the exponential at high precision.
ATAN = "atan"
ATANH = "atanh"
EXP = "exp"
SIN = "sin"
COS = "cos"
SINH = "sinh"

SERIES_KINDS = (ATAN, ATANH, EXP, SIN, COS)

#: Odd tables serve term indices up to 300; factorial tables are read
#: at index 2k+1 by the sin kernel, so they extend past 600.
ODD_LEN = 320
FACTORIAL_LEN = 640

#: When True the kernels assert the canonical-range conditions that the
#: prover establishes (S nonnegative and below one integral limb before
#: every multiplication or division).
CHECKED = False


@dataclass
class DenomTable:
    """Shared-denominator coefficient table for one series family.

    kind "odd": u_k/v_k = 1/(2k+1) with v_k the lcm of 2i+1 over the
    block containing k; each block is the longest run that keeps v_k
    within one limb.

    kind "factorial": v_k is the product of the integers covered by k's
    block, so consecutive blocks telescope into k!; u_k/v_k equals
    1/k! times the product of all earlier distinct v values.
    """

    kind: str
    limb_bits: int
    u: list = field(repr=False)
    v: list = field(repr=False)
    breaks: list = field(repr=False)

    def __len__(self):
        return len(self.u)


def gen_denom_table(kind, limb_bits, length=None):
    """Generate the (u, v) table for one coefficient family.

    Blocks are grown greedily from k = 0: each block is extended until
    adding the next factor would overflow 2^B - 1.  Deterministic.
    """
    assert limb_bits in (32, 64)
    if length is None:
        length = ODD_LEN if kind == ODD else FACTORIAL_LEN
    limit = (1 << limb_bits) - 1
    u, v = [], []
    k = 0
    if kind == ODD:
        while len(u) < length:
            blockv = 1
            j = k
            while True:
                cand = blockv * ((2 * j + 1) // math.gcd(blockv, 2 * j + 1))
                if cand > limit:
                    break
                blockv = cand
                j += 1
            for i in range(k, j):
                u.append(blockv // (2 * i + 1))
                v.append(blockv)
            k = j
    elif kind == FACTORIAL:
        while len(u) < length:
            blockv = 1
            j = k
            while True:
                cand = blockv * max(j, 1)
                if cand > limit and j > k:
                    break
                blockv = cand
                j += 1
            for i in range(k, j):
                w = 1
                for t in range(i + 1, j):
                    w *= t
                u.append(w)
                v.append(blockv)
            k = j
    else:
        raise ValueError(kind)
    u, v = u[:length], v[:length]
    breaks = [k for k in range(length - 1) if v[k] != v[k + 1]]
    return DenomTable(kind, limb_bits, u, v, breaks)


_table_cache = {}


def denom_table(kind, limb_bits):
    """Cached table access (tables are immutable after generation)."""
    key = (kind, limb_bits)
    if key not in _table_cache:
        _table_cache[key] = gen_denom_table(kind, limb_bits)
    return _table_cache[key]


def dump_denom_table(table):
    """Textual dump: one line per k with fields k, u_k, v_k, break flag."""
    brk = set(table.breaks)
    lines = ["%d %d %d %d" % (k, table.u[k], table.v[k], 1 if k in brk else 0)
             for k in range(len(table))]
    return "\n".join(lines) + "\n"


def _power_table(xval, n, bits, m, square_first):
    """Powers of X (or X^2) as raw n-limb values: T[k] ~ X^(2k) resp. X^k.

    T[k] carries at most k ulp of accumulated truncation error.
    """
    shift = bits * n
    T = [None] * (m + 1)
    T[1] = (xval * xval) >> shift if square_first else xval
    if m >= 2:
        T[2] = (T[1] * T[1]) >> shift
    k = 4
    while k <= m:
        T[k - 1] = (T[k // 2] * T[k // 2 - 1]) >> shift
        T[k] = (T[k // 2] * T[k // 2]) >> shift
        k += 2
    return T


def _splitting_param(N):
    s = math.isqrt(N)
    if s * s < N:
        s += 1
    return 2 * ((s + 1) // 2)


def _eval_core(xval, n, N, table, bits, *, alternating, stride, offset,
               square_first, factorial, final_mul, out_nint, powers=None,
               trace=None):
    """Backward rectangular-splitting evaluation over raw limb values.

    Term k has coefficient u[stride*k + offset] / v[stride*k + offset]
    and power T[k mod m]; the sum is accumulated in S (n fractional
    limbs plus one integral limb, two's complement wraparound permitted
    between additions).  trace, when given, collects (label, k, S) at
    the program points the prover bounds.
    """
    u, v = table.u, table.v
    shift = bits * n
    swidth = bits * (n + 1)
    mask = (1 << swidth) - 1
    sign_bit = swidth - 1
    m = _splitting_param(N)
    T = powers if powers is not None else _power_table(xval, n, bits, m,
                                                       square_first)

    S = 0
    for k in range(N - 1, -1, -1):
        j = stride * k + offset
        jn = j + stride
        if k < N - 1 and v[j] != v[jn]:
            if trace is not None:
                trace.append(("change", k, S))
            neg = (S >> sign_bit) & 1
            if neg:
                S = (S + (v[jn] << shift)) & mask
            if CHECKED:
                assert 0 <= S < (1 << (shift + bits)), "S not canonical at change"
            if not factorial:
                S = S * v[j]  # exact, n+2 limbs
            S = S // v[jn]
            if neg:
                back = (v[j] if not factorial else 1) << shift
                S = (S - back) & mask
            if trace is not None:
                trace.append(("post-change", k, S))
        c = u[j]
        if k % m == 0:
            if alternating and (k & 1):
                S = (S - (c << shift)) & mask
            else:
                S = (S + (c << shift)) & mask
            if k:
                if trace is not None:
                    trace.append(("horner", k, S))
                if CHECKED:
                    assert 0 <= S < (1 << (shift + bits)), "S not canonical at Horner step"
                S = (S * T[m]) >> shift
        else:
            t = c * T[k % m]
            if alternating and (k & 1):
                S = (S - t) & mask
            else:
                S = (S + t) & mask
    if trace is not None:
        trace.append(("final-div", 0, S))
    if CHECKED:
        assert 0 <= S < (1 << (shift + bits)), "S not canonical at final division"
    S = S // v[offset]
    if final_mul:
        if trace is not None:
            trace.append(("final-mul", 0, S))
        S = (S * xval) >> shift
    assert S < (1 << (shift + bits * out_nint))
    return S


def _check_args(x, N, table, kind):
    assert isinstance(x, FixedPoint) and x.nint == 0
    assert table.kind == kind and table.limb_bits == x.bits
    assert 0 <= x.val <= (1 << (x.bits * x.nfrac - 4)), "argument must be <= 2^-4"
    assert 2 < N < 300


def eval_atan_series(x, N, table):
    """sum_{k<N} (-1)^k X^(2k+1)/(2k+1), within 2 ulp.  0 <= X <= 2^-4."""
    _check_args(x, N, table, ODD)
    val = _eval_core(x.val, x.nfrac, N, table, x.bits, alternating=True,
                     stride=1, offset=0, square_first=True, factorial=False,
                     final_mul=True, out_nint=0)
    return FixedPoint(val, x.nfrac, 0, x.bits)


def eval_atanh_series(x, N, table):
    """sum_{k<N} X^(2k+1)/(2k+1), within 2 ulp.  0 <= X <= 2^-4."""
    _check_args(x, N, table, ODD)
    val = _eval_core(x.val, x.nfrac, N, table, x.bits, alternating=False,
                     stride=1, offset=0, square_first=True, factorial=False,
                     final_mul=True, out_nint=0)
    return FixedPoint(val, x.nfrac, 0, x.bits)


def eval_exp_series(x, N, table):
    """sum_{k<N} X^k/k!, within 2 ulp; the result has one integral limb."""
    _check_args(x, N, table, FACTORIAL)
    val = _eval_core(x.val, x.nfrac, N, table, x.bits, alternating=False,
                     stride=1, offset=0, square_first=False, factorial=True,
                     final_mul=False, out_nint=1)
    return FixedPoint(val, x.nfrac, 1, x.bits)


def eval_sinh_series(x, N, table):
    """sum_{k<N} X^(2k+1)/(2k+1)!, within 2 ulp.

    Positive-term sibling of the sin kernel; used to halve the series
    length of exp at high precision via exp(x) = sinh + sqrt(1+sinh^2).
    """
    _check_args(x, N, table, FACTORIAL)
    val = _eval_core(x.val, x.nfrac, N, table, x.bits, alternating=False,
                     stride=2, offset=1, square_first=True, factorial=True,
                     final_mul=True, out_nint=0)
    return FixedPoint(val, x.nfrac, 0, x.bits)


def eval_sin_cos_series(x, N, table, want="both"):
    """Simultaneous sin and cos sums, each within 2 ulp.

    sin: sum (-1)^k X^(2k+1)/(2k+1)!   (n limbs)
    cos: sum (-1)^k X^(2k)/(2k)!       (n limbs plus one integral limb)

    The factorial table is read at the odd indices for sin and the even
    indices for cos; the power table over X^2 is built once and shared.
    want = "sin"/"cos" skips the other pass (for the top levels that
    derive the cosine from the sine via a square root).
    """
    _check_args(x, N, table, FACTORIAL)
    n, bits = x.nfrac, x.bits
    T = _power_table(x.val, n, bits, _splitting_param(N), True)
    sin_out = cos_out = None
    if want in ("sin", "both"):
        val = _eval_core(x.val, n, N, table, bits, alternating=True,
                         stride=2, offset=1, square_first=True,
                         factorial=True, final_mul=True, out_nint=0, powers=T)
        sin_out = FixedPoint(val, n, 0, bits)
    if want in ("cos", "both"):
        val = _eval_core(x.val, n, N, table, bits, alternating=True,
                         stride=2, offset=0, square_first=True,
                         factorial=True, final_mul=False, out_nint=1, powers=T)
        cos_out = FixedPoint(val, n, 1, bits)
    return sin_out, cos_out

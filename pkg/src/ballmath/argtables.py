"""
Lookup tables for argument reduction, and the constant pool.

Each function has a fast table (precision band up to 512 bits) and an
economical table (up to 4608 bits).  A table stores correctly rounded
function values on the grid i/2^r (first table of a chain) and
j/2^(2r) (second table), rounded to nearest at the band precision P.
Parameters per (function, band):

    function  band         chains m  r   entries      payload KiB
    exp       fast            1      8   178          11.125
    exp       economical      2      5   23+32        30.9375
    sin/cos   fast            1      8   203          12.6875 each
    sin/cos   economical      2      5   26+32        32.625  each
    log       fast            2      7   128+128      16
    log       economical      2      5   32+32        36
    atan      fast            1      8   256          16
    atan      economical      2      5   32+32        36

Total payload 236.6875 KiB, well under 256 KiB.  Tables ship as
generated text data and are re-derived bit-identically by gen_argred_table.

Generation never consults an outside math library: every entry is
reached through exact-rational small-argument identities feeding this
package's own series kernels at P + 64 guard bits, and is then rounded
to nearest with an explicit ambiguity check (on the astronomically
unlikely ambiguity, the guard is widened and the entry redone):

    atan(i/2^s)   = atan((i-1)/2^s) + atan(2^s / (2^2s + i(i-1)))
    log(1+i/2^s)  = log(1+(i-1)/2^s) + 2 atanh(1 / (2^(s+1) + 2i - 1))
    sin/cos grid  = angle addition by the exact step 2^-s
    exp(i/2^s)    = [exp(i/2^(s+t))]^(2^t), squaring t times

pi/4 and log 2 are the telescoped sums over the full grid (atan(1) and
log(2) respectively); pi/2 is an exact doubling.  Constants are stored
correctly rounded at 4608 + 64 bits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from .series import (FACTORIAL, ODD, denom_table, _eval_core,
                     _splitting_param)
from .fixedpoint import FixedPoint

FAST = "fast"
ECONOMICAL = "economical"

BAND_PRECISION = {FAST: 512, ECONOMICAL: 4608}
CONSTANT_PRECISION = 4608 + 64

#: (function, band) -> (chain count m, bits per table r, entry counts)
TABLE_SPECS = {
    ("exp", FAST): (1, 8, (178,)),
    ("exp", ECONOMICAL): (2, 5, (23, 32)),
    ("sin", FAST): (1, 8, (203,)),
    ("sin", ECONOMICAL): (2, 5, (26, 32)),
    ("cos", FAST): (1, 8, (203,)),
    ("cos", ECONOMICAL): (2, 5, (26, 32)),
    ("log", FAST): (2, 7, (128, 128)),
    ("log", ECONOMICAL): (2, 5, (32, 32)),
    ("atan", FAST): (1, 8, (256,)),
    ("atan", ECONOMICAL): (2, 5, (32, 32)),
}

FUNCTIONS = ("exp", "sin", "cos", "log", "atan")

#: generation guard bits on top of the band precision
_GUARD = 64

#: generation always runs on 64-bit limbs so that the shipped data is
#: independent of the build's limb-size switch
_GB = 64


@dataclass
class ArgRedTable:
    function: str
    band: str
    chain_count: int
    bits_per_table: int
    counts: tuple
    precision: int
    entries: list  # per chained table: list of (mantissa, exponent)

    def payload_bits(self):
        return sum(self.counts) * self.precision

    def payload_kib(self):
        return self.payload_bits() / 8192.0

    def grid_shift(self, which):
        """Grid of chained table `which` (1-based): entries at i/2^shift."""
        return self.bits_per_table * which if self.chain_count == 2 \
            else self.bits_per_table


class _Ambiguous(Exception):
    """Value too close to a rounding boundary for the current guard."""


def _round_nearest(val, width, err_ulp, prec):
    """Round val*2^-width (error below err_ulp*2^-width) to nearest at
    prec bits; returns (mantissa, exponent) or raises _Ambiguous."""
    if val == 0:
        if err_ulp:
            raise _Ambiguous
        return (0, 0)
    exp = val.bit_length() - width
    drop = val.bit_length() - prec
    if drop <= 0:
        return (val << -drop, exp)
    man, rem = val >> drop, val & ((1 << drop) - 1)
    half = 1 << (drop - 1)
    if abs(rem - half) <= err_ulp:
        raise _Ambiguous
    if rem > half:
        man += 1
        if man.bit_length() > prec:
            man >>= 1
            exp += 1
    return (man, exp)


class _Generator:
    """Shared machinery for one working precision."""

    def __init__(self, work_bits):
        self.w = work_bits
        self.n = -(-work_bits // _GB)
        self.shift = _GB * self.n
        self.odd = denom_table(ODD, _GB)
        self.fact = denom_table(FACTORIAL, _GB)

    def _fx(self, num, den):
        """num/den in [0,1) as a raw fixed-point value, truncated."""
        return (num << self.shift) // den

    def _series(self, xval, *, kind):
        """Kernel call with a tail-driven term count; adds <= 3 ulp
        (2 from the kernel, 1 from the truncated tail)."""
        if xval == 0:
            one = 1 << self.shift
            return one if kind in ("exp", "cos") else 0
        # largest r with xval <= 2^-r (nonstrict: the tail bound only
        # needs X <= 2^-r, and telescope steps can be exactly 2^-s)
        r = self.shift - xval.bit_length()
        if xval & (xval - 1) == 0:
            r += 1
        assert r >= 8, "generator arguments stay below 2^-8"
        if kind in ("atan", "atanh"):
            N = -(-(self.w + 1 - r) // (2 * r))
        elif kind == "exp":
            N = 1
            while r * N + _log2_fact(N) < self.w + 1:
                N += 1
        else:  # sin/cos pair: the cos tail X^(2N)/(2N)! dominates
            N = 1
            while 2 * r * N + _log2_fact(2 * N) < self.w:
                N += 1
        N = max(N, 3)
        assert N < 300
        if kind == "atan":
            return _eval_core(xval, self.n, N, self.odd, _GB,
                              alternating=True, stride=1, offset=0,
                              square_first=True, factorial=False,
                              final_mul=True, out_nint=0)
        if kind == "atanh":
            return _eval_core(xval, self.n, N, self.odd, _GB,
                              alternating=False, stride=1, offset=0,
                              square_first=True, factorial=False,
                              final_mul=True, out_nint=0)
        if kind == "exp":
            return _eval_core(xval, self.n, N, self.fact, _GB,
                              alternating=False, stride=1, offset=0,
                              square_first=False, factorial=True,
                              final_mul=False, out_nint=1)
        raise ValueError(kind)

    def _sin_cos(self, xval):
        if xval == 0:
            return 0, 1 << self.shift
        r = self.shift - xval.bit_length()
        if xval & (xval - 1) == 0:
            r += 1
        assert r >= 4
        N = 1
        while 2 * r * N + _log2_fact(2 * N) < self.w:
            N += 1
        N = max(N, 3)
        assert N < 300
        s = _eval_core(xval, self.n, N, self.fact, _GB, alternating=True,
                       stride=2, offset=1, square_first=True, factorial=True,
                       final_mul=True, out_nint=0)
        c = _eval_core(xval, self.n, N, self.fact, _GB, alternating=True,
                       stride=2, offset=0, square_first=True, factorial=True,
                       final_mul=False, out_nint=1)
        return s, c

    # --- value sweeps ----------------------------------------------------

    def atan_grid(self, s, count):
        """atan(i/2^s) for i < count, telescoped; per-entry error grows
        by at most 4 ulp per step."""
        vals, errs = [0], [0]
        for i in range(1, count):
            num, den = 1 << s, (1 << (2 * s)) + i * (i - 1)
            delta = self._series(self._fx(num, den), kind="atan")
            vals.append(vals[-1] + delta)
            errs.append(errs[-1] + 4)
        return vals, errs

    def log_grid(self, s, count):
        """log(1 + i/2^s) for i < count."""
        vals, errs = [0], [0]
        for i in range(1, count):
            den = (1 << (s + 1)) + 2 * i - 1
            at = self._series(self._fx(1, den), kind="atanh")
            vals.append(vals[-1] + 2 * at)
            errs.append(errs[-1] + 8)
        return vals, errs

    def sin_cos_grid(self, s, count):
        """(sin, cos)(i/2^s) for i < count by exact-step angle addition."""
        sd, cd = self._sin_cos(1 << (self.shift - s))
        svals, cvals = [0], [1 << self.shift]
        errs = [0]
        for i in range(1, count):
            sp, cp = svals[-1], cvals[-1]
            s_new = (sp * cd + cp * sd) >> self.shift
            c_new = (cp * cd - sp * sd) >> self.shift
            assert c_new >= 0
            svals.append(s_new)
            cvals.append(c_new)
            # error compounds by (cos d + sin d) <= 1 + 2^-s per step
            e = errs[-1]
            errs.append(e + (e >> (s - 1)) + 9)
        return svals, cvals, errs

    def exp_entry(self, i, s):
        """exp(i/2^s) in [1, 2), via 2^t-th root then t squarings."""
        if i == 0:
            return 1 << self.shift, 0
        t = max(0, self.exp_arg_shift() - s + i.bit_length())
        xval = i << (self.shift - s - t)
        e = self._series(xval, kind="exp")
        err = 3
        for _ in range(t):
            e = (e * e) >> self.shift
            err = 5 * err + 1  # 2*|E|*err + 1 with |E| < 2.1
        return e, err

    def atan_arg_shift(self):
        """Smallest s with the odd-series term count below 300 at this
        working precision (arguments will be at most 2^-s)."""
        s = 8
        while -(-(self.w + 1 - s) // (2 * s)) >= 300:
            s += 1
        return s

    def exp_arg_shift(self):
        s = 9
        while True:
            N = 1
            while s * N + _log2_fact(N) < self.w + 1:
                N += 1
            if N < 300:
                return s
            s += 1


def _log2_fact(k, _cache={}):
    """floor(log2(k!)), memoized."""
    if k not in _cache:
        import math

        _cache[k] = math.factorial(k).bit_length() - 1
    return _cache[k]


def gen_argred_table(function, band, guard=_GUARD):
    """Deterministically generate one table with correctly rounded
    entries at the band precision."""
    m, r, counts = TABLE_SPECS[(function, band)]
    P = BAND_PRECISION[band]
    while True:
        try:
            return _gen_attempt(function, band, m, r, counts, P, P + guard)
        except _Ambiguous:
            guard += 64


def _gen_attempt(function, band, m, r, counts, P, work_bits):
    gen = _Generator(work_bits)
    entries = []
    for which, count in enumerate(counts, start=1):
        s = r * which if len(counts) == 2 else r
        if function == "atan":
            want_s = max(s, gen.atan_arg_shift())
            vals, errs = gen.atan_grid(want_s, ((count - 1) << (want_s - s)) + 1)
            step = 1 << (want_s - s)
            table = [_round_nearest(vals[i * step], gen.shift,
                                    errs[i * step], P) for i in range(count)]
        elif function == "log":
            # telescoped arguments are below 2^-(s+1)
            want_s = max(s, gen.atan_arg_shift() - 1)
            vals, errs = gen.log_grid(want_s, ((count - 1) << (want_s - s)) + 1)
            step = 1 << (want_s - s)
            table = [_round_nearest(vals[i * step], gen.shift,
                                    errs[i * step], P) for i in range(count)]
        elif function in ("sin", "cos"):
            svals, cvals, errs = gen.sin_cos_grid(s, count)
            vals = svals if function == "sin" else cvals
            table = [_round_nearest(vals[i], gen.shift, errs[i], P)
                     for i in range(count)]
        elif function == "exp":
            table = []
            for i in range(count):
                val, err = gen.exp_entry(i, s)
                table.append(_round_nearest(val, gen.shift, err, P))
        else:
            raise ValueError(function)
        entries.append(table)
    return ArgRedTable(function, band, m, r, counts, P, entries)


def gen_constants(guard=_GUARD):
    """pi/4, pi/2 and log 2, correctly rounded at 4608 + 64 bits.

    pi/4 is atan(1) telescoped over the full 2^-s grid; log 2 is
    log(1 + 1) telescoped likewise; pi/2 doubles pi/4 exactly.
    """
    P = CONSTANT_PRECISION
    while True:
        try:
            gen = _Generator(P + guard)
            s = gen.atan_arg_shift()
            vals, errs = gen.atan_grid(s, (1 << s) + 1)
            pi4 = _round_nearest(vals[1 << s], gen.shift, errs[1 << s], P)
            pi2 = (pi4[0], pi4[1] + 1)
            s = max(7, gen.atan_arg_shift() - 1)
            lvals, lerrs = gen.log_grid(s, (1 << s) + 1)
            log2 = _round_nearest(lvals[1 << s], gen.shift, lerrs[1 << s], P)
            return {"pi/4": pi4, "pi/2": pi2, "log2": log2}
        except _Ambiguous:
            guard += 64


# --- storage ------------------------------------------------------------

def dump_table(table):
    """Text dump: header `function band m r counts P`, then one entry
    per line as lowercase hex mantissa with explicit binary exponent."""
    counts = "+".join(str(c) for c in table.counts)
    lines = ["%s %s %d %d %s %d" % (table.function, table.band,
                                    table.chain_count, table.bits_per_table,
                                    counts, table.precision)]
    for sub in table.entries:
        for man, exp in sub:
            lines.append("%x p%+d" % (man, exp))
    return "\n".join(lines) + "\n"


def parse_table_dump(text):
    tables = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        function, band, m, r = parts[0], parts[1], int(parts[2]), int(parts[3])
        counts = tuple(int(c) for c in parts[4].split("+"))
        P = int(parts[5])
        i += 1
        entries = []
        for count in counts:
            sub = []
            for _ in range(count):
                man_s, exp_s = lines[i].split()
                assert exp_s[0] == "p"
                sub.append((int(man_s, 16), int(exp_s[1:])))
                i += 1
            entries.append(sub)
        tables.append(ArgRedTable(function, band, m, r, counts, P, entries))
    return tables


def dump_constants(consts):
    lines = ["constants %d" % CONSTANT_PRECISION]
    for name in ("pi/4", "pi/2", "log2"):
        man, exp = consts[name]
        lines.append("%s %x p%+d" % (name, man, exp))
    return "\n".join(lines) + "\n"


def parse_constants_dump(text):
    lines = text.splitlines()
    assert lines[0].split() == ["constants", str(CONSTANT_PRECISION)]
    out = {}
    for line in lines[1:]:
        name, man_s, exp_s = line.split()
        out[name] = (int(man_s, 16), int(exp_s[1:]))
    return out


_DATA_FILES = {FAST: "argtables_fast.txt", ECONOMICAL: "argtables_econ.txt"}

_loaded_tables = {}
_loaded_constants = None


def _data_dir_override():
    return os.environ.get("BALLMATH_TABLE_DIR")


def _read_data(name):
    override = _data_dir_override()
    if override:
        with open(os.path.join(override, name)) as f:
            return f.read()
    return resources.files("ballmath").joinpath("data", name).read_text()


def load_tables(band):
    """The five shipped tables of one band, keyed by function name."""
    if band not in _loaded_tables:
        tables = parse_table_dump(_read_data(_DATA_FILES[band]))
        _loaded_tables[band] = {t.function: t for t in tables}
    return _loaded_tables[band]


def load_constants():
    global _loaded_constants
    if _loaded_constants is None:
        _loaded_constants = parse_constants_dump(_read_data("constants.txt"))
    return _loaded_constants


def get_table(function, band):
    return load_tables(band)[function]


# --- lookup -------------------------------------------------------------

def lookup(table, which, index, w, limb_bits=None):
    """Entry `index` of chained table `which`, truncated to ceil(w/B)
    fractional limbs.  Total error below 1 ulp at that width (0.5 ulp
    of stored rounding at the band precision plus truncation)."""
    from .fixedpoint import DEFAULT_LIMB_BITS

    bits = limb_bits or DEFAULT_LIMB_BITS
    assert w <= table.precision
    man, exp = table.entries[which - 1][index]
    n = -(-w // bits)
    shift = table.precision - exp - bits * n
    val = man >> shift if shift >= 0 else man << -shift
    nint = 1 if exp > 0 else 0
    return FixedPoint(val, n, nint, bits)


def verify_tables(reference_text, band):
    """Compare the loaded band tables against a reference dump.

    Returns a list of mismatch descriptions (empty when clean); raises
    ValueError if the reference is missing entries or malformed.
    """
    try:
        ref_tables = {t.function: t for t in parse_table_dump(reference_text)}
    except (AssertionError, IndexError, ValueError) as e:
        raise ValueError("malformed reference dump: %s" % e)
    mine = load_tables(band)
    mismatches = []
    for fn in FUNCTIONS:
        if fn not in ref_tables:
            raise ValueError("reference dump lacks %s/%s" % (fn, band))
        a, b = mine[fn], ref_tables[fn]
        if (a.counts != b.counts or a.precision != b.precision
                or a.chain_count != b.chain_count
                or a.bits_per_table != b.bits_per_table):
            raise ValueError("size mismatch for %s/%s" % (fn, band))
        for which in range(a.chain_count):
            for idx, (mine_e, ref_e) in enumerate(zip(a.entries[which],
                                                      b.entries[which])):
                if mine_e != ref_e:
                    mismatches.append("%s/%s table %d entry %d: %x p%+d != "
                                      "%x p%+d" % (fn, band, which + 1, idx,
                                                   *mine_e, *ref_e))
    return mismatches


def total_payload_bits():
    total = 0
    for band in (FAST, ECONOMICAL):
        for t in load_tables(band).values():
            total += t.payload_bits()
    return total

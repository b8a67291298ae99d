"""Audit of the library's table dumps.

Every entry of every dumped lookup table is re-derived with mpmath at
generous precision and checked to be the correctly rounded (nearest)
value at the band precision; the whole dump is then re-rendered from
the re-derived entries and must match the input byte for byte.
"""

from fractions import Fraction

import mpmath

_GRID_FUNCS = {
    "exp": lambda x: mpmath.exp(x),
    "sin": lambda x: mpmath.sin(x),
    "cos": lambda x: mpmath.cos(x),
    "log": lambda x: mpmath.log(1 + x),
    "atan": lambda x: mpmath.atan(x),
}


def _round_nearest_bits(v, bits):
    """Correctly rounded `bits`-bit (mantissa, exponent-of-leading-bit)
    for a positive mpf computed with ample guard precision."""
    if v == 0:
        return (0, 0)
    fr, e = mpmath.frexp(v)
    scaled = fr * (1 << bits)  # in [2^(bits-1), 2^bits)
    man = int(mpmath.floor(scaled))
    rem = scaled - man
    if rem > 0.5 or (rem == 0.5 and man & 1):
        man += 1
    if man >> bits:
        man >>= 1
        e += 1
    return (man, e)


def parse_dump(text):
    """Parse the dump format: header `function band m r counts P`, then
    one `hexmantissa p<exp>` line per entry."""
    tables = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        fn, band, m, r, counts_s, P = lines[i].split()
        m, r, P = int(m), int(r), int(P)
        counts = tuple(int(c) for c in counts_s.split("+"))
        i += 1
        entries = []
        for c in counts:
            sub = []
            for _ in range(c):
                man_s, exp_s = lines[i].split()
                if not exp_s.startswith("p"):
                    raise ValueError("bad entry line %d" % i)
                sub.append((int(man_s, 16), int(exp_s[1:])))
                i += 1
            entries.append(sub)
        tables.append(dict(function=fn, band=band, m=m, r=r, counts=counts,
                           precision=P, entries=entries))
    return tables


def render_dump(tables):
    lines = []
    for t in tables:
        lines.append("%s %s %d %d %s %d" % (
            t["function"], t["band"], t["m"], t["r"],
            "+".join(str(c) for c in t["counts"]), t["precision"]))
        for sub in t["entries"]:
            for man, exp in sub:
                lines.append("%x p%+d" % (man, exp))
    return "\n".join(lines) + "\n"


def _grid_shift(t, which):
    return t["r"] * which if len(t["counts"]) == 2 else t["r"]


def audit_table_dump(text):
    """Re-derive every entry; returns (mismatches, rederived_dump)."""
    tables = parse_dump(text)
    mismatches = []
    rederived = []
    for t in tables:
        P = t["precision"]
        fn = _GRID_FUNCS[t["function"]]
        new_entries = []
        for which, sub in enumerate(t["entries"], start=1):
            s = _grid_shift(t, which)
            new_sub = []
            for i, (man, exp) in enumerate(sub):
                mpmath.mp.prec = P + 96
                val = fn(mpmath.mpf(i) / (1 << s))
                ref = _round_nearest_bits(val, P)
                new_sub.append(ref)
                if ref != (man, exp):
                    mismatches.append("%s/%s table %d entry %d: stored "
                                      "%x p%+d, re-derived %x p%+d"
                                      % (t["function"], t["band"], which, i,
                                         man, exp, *ref))
            new_entries.append(new_sub)
        rederived.append(dict(t, entries=new_entries))
    return mismatches, render_dump(rederived)


def audit_constants_dump(text):
    """Check the constant pool dump (pi/4, pi/2, log2)."""
    lines = text.splitlines()
    head, P = lines[0].split()
    if head != "constants":
        raise ValueError("not a constants dump")
    P = int(P)
    mpmath.mp.prec = P + 96
    refs = {"pi/4": mpmath.pi / 4, "pi/2": mpmath.pi / 2,
            "log2": mpmath.log(2)}
    mismatches = []
    for line in lines[1:]:
        name, man_s, exp_s = line.split()
        got = (int(man_s, 16), int(exp_s[1:]))
        ref = _round_nearest_bits(refs[name], P)
        if got != ref:
            mismatches.append("%s: stored %x p%+d, re-derived %x p%+d"
                              % (name, *got, *ref))
    return mismatches

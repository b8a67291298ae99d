"""
Exhaustive symbolic verification of the series kernels.

For every term count N in range, the kernel's exact control flow is
replayed over an abstract domain instead of limb arrays.  An abstract
value is

    stored = P(t)/den + [slo, shi] - [0..err] * ulp-ish

where P is a polynomial with exact integer coefficients over a shared
positive denominator, in the power variable t (t = X^2 for the
odd-power kernels, t = X for exp); the slack interval absorbs folded
residue terms, and err bounds the accumulated rounding error in ulp
units (two-sided magnitude).  t ranges over [0, 2^-8] (resp.
[0, 2^-4]); the limb count n is never fixed: magnitudes are tracked in
absolute units and errors in ulp units with ulp <= 2^-B, so one run
covers every n >= 1.  err and the slack are rounded outward to short
dyadic rationals after every step, keeping all bookkeeping integers
small; the polynomial part stays exact.

Polynomial ranges are bounded by grouping adjacent-degree pairs
t^d (c + b t), evaluated with both pairing phases and intersected.
This is what makes the bounds tight for the alternating kernels, where
consecutive coefficients nearly cancel.

At every multiplication or division of the running sum S the verifier
checks the canonical-range conditions the kernels rely on:

  * the stored value fits one integral limb (|S| <= 2^B - ulp);
  * at a denominator change, |S| also stays below 2^(B-1), so the top
    bit of the n+1 limb window is exactly the sign and the kernel's
    sign-tested shift branch is discriminated correctly, and the shift
    v_old clears the sign whenever a negative is possible;
  * the n+2-limb intermediate of the shifted multiply fits;
  * S is nonnegative before the Horner multiply, the closing division
    and the final multiply (the adjacent-degree pairing makes this
    provable: the freshly added coefficient dominates the paired tail).

A run passes when all checks hold for every N and the final error
bound is at most 2 ulp.  The outcome depends on the concrete table
contents, which are also cross-checked against the exact coefficient
identities they encode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .series import (ATAN, ATANH, COS, EXP, FACTORIAL, ODD, SERIES_KINDS,
                     SIN, SINH, denom_table, _splitting_param)

#: degrees above this are folded into the slack interval; contributions
#: are below 2^(-8*cap) absolutely, far under every bound checked
_DEG_CAP = 48

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _up_dyadic(q):
    """Round a Fraction up to a dyadic with a short numerator (sound
    upper bound)."""
    if q == 0:
        return _ZERO
    if q < 0:
        return -_pos_down(-q)
    n, d = q.numerator, q.denominator
    if d == 1:
        return q
    # ceil(n * 2^k / d) / 2^k with k keeping ~60 significant bits
    k = max(0, 60 - (n.bit_length() - d.bit_length()))
    return Fraction(-(-(n << k) // d), 1 << k)


def _down_dyadic(q):
    """Round a Fraction down to a dyadic (sound lower bound)."""
    if q == 0:
        return _ZERO
    return _pos_down(q) if q > 0 else -_up_dyadic(-q)


def _pos_down(q):
    n, d = q.numerator, q.denominator
    if d == 1:
        return q
    k = max(0, 60 - (n.bit_length() - d.bit_length()))
    return Fraction((n << k) // d, 1 << k)


def _chunk(d, g_lo, g_hi, hbits, F):
    """Bounds of t^d * g(t) for g in [g_lo, g_hi] (at scale 2^-hbits),
    t in [0, 2^-hbits]; results at scale 2^-F, exact integers."""
    if d == 0:
        return g_lo << (F - hbits), g_hi << (F - hbits)
    sh = F - hbits * (d + 1)
    lo = g_lo << sh
    hi = g_hi << sh
    return (lo if lo < 0 else 0), (hi if hi > 0 else 0)


def _scan(degs, poly, hbits, F, skip_first):
    lo = hi = 0
    i = 0
    if skip_first and degs:
        d = degs[0]
        g = poly[d] << hbits
        l, u = _chunk(d, g, g, hbits, F)
        lo += l
        hi += u
        i = 1
    while i < len(degs):
        d = degs[i]
        if i + 1 < len(degs) and degs[i + 1] == d + 1:
            g1 = poly[d] << hbits
            g2 = g1 + poly[d + 1]
            l, u = _chunk(d, min(g1, g2), max(g1, g2), hbits, F)
            i += 2
        else:
            g = poly[d] << hbits
            l, u = _chunk(d, g, g, hbits, F)
            i += 1
        lo += l
        hi += u
    return lo, hi


def _poly_range(poly, hbits, F):
    """Sound bounds for sum c_d t^d over t in [0, 2^-hbits], tight for
    alternating coefficient sequences (both pairing phases are tried
    and intersected).  Integer coefficients; integer results at scale
    2^-F."""
    if not poly:
        return 0, 0
    degs = sorted(poly)
    lo0, hi0 = _scan(degs, poly, hbits, F, False)
    lo1, hi1 = _scan(degs, poly, hbits, F, True)
    return max(lo0, lo1), min(hi0, hi1)


class AbstractValue:
    """Magnitude/error over-approximation of one fixed-point variable."""

    __slots__ = ("poly", "den", "slo", "shi", "err")

    def __init__(self, poly=None, den=1, slo=_ZERO, shi=_ZERO, err=_ZERO):
        self.poly = poly or {}
        self.den = den
        self.slo = slo
        self.shi = shi
        self.err = err

    def fold(self, hbits):
        for d in [d for d in self.poly if d > _DEG_CAP]:
            c = self.poly.pop(d)
            v = Fraction(c, self.den << (hbits * d))
            self.slo += _down_dyadic(min(v, _ZERO))
            self.shi += _up_dyadic(max(v, _ZERO))
        return self

    def range_scaled(self, hbits, F):
        """Bounds on the true value as integers at scale den * 2^F."""
        lo, hi = _poly_range(self.poly, hbits, F)
        if self.slo:
            lo += _dyadic_scaled(self.slo, self.den, F, up=False)
        if self.shi:
            hi += _dyadic_scaled(self.shi, self.den, F, up=True)
        return lo, hi

    def stored_scaled(self, hbits, F, ulpb_bits):
        """Bounds on the stored value (true plus error window), same
        scale as range_scaled."""
        lo, hi = self.range_scaled(hbits, F)
        e = _dyadic_scaled(self.err, self.den, F - ulpb_bits, up=True)
        return lo - e, hi + e

    def true_range(self, hbits, F):
        lo, hi = self.range_scaled(hbits, F)
        den = self.den << F
        return Fraction(lo, den), Fraction(hi, den)

    def max_magnitude(self, hbits, F):
        """Rational upper bound on the true value's magnitude."""
        lo, hi = self.range_scaled(hbits, F)
        return Fraction(max(-lo, hi), self.den << F)

    @property
    def max_error(self):
        """Rational upper bound on the accumulated error, in ulp."""
        return self.err

    def stored_range(self, hbits, F, ulpb):
        lo, hi = self.true_range(hbits, F)
        return lo - self.err * ulpb, hi + self.err * ulpb


def _dyadic_scaled(q, den, F, up):
    """q * den * 2^F as an integer (q dyadic); exact when the scale
    allows, otherwise rounded in the sound direction."""
    n, d = q.numerator, q.denominator
    sh = F - (d.bit_length() - 1)
    if sh >= 0:
        return n * den << sh
    x = n * den
    return -((-x) >> -sh) if up else x >> -sh


@dataclass
class ProofReport:
    kind: str
    limb_bits: int
    n_min: int
    n_max: int
    per_n_error: dict = field(repr=False, default_factory=dict)
    max_error: Fraction = _ZERO
    max_error_n: int = 0
    checks: int = 0
    failure: str = None

    @property
    def passed(self):
        return self.failure is None and self.max_error <= 2

    def summary(self):
        state = "PASS" if self.passed else "FAIL"
        msg = "%-5s B=%-2d N=%d..%d  max_err=%.6f ulp  checks=%d  %s" % (
            self.kind, self.limb_bits, self.n_min, self.n_max,
            float(self.max_error), self.checks, state)
        if self.failure:
            msg += "  [%s]" % self.failure
        return msg


class _CheckFailure(Exception):
    pass


_KIND_PARAMS = {
    ATAN: dict(table=ODD, alternating=True, stride=1, offset=0,
               square_first=True, factorial=False, final_mul=True),
    ATANH: dict(table=ODD, alternating=False, stride=1, offset=0,
                square_first=True, factorial=False, final_mul=True),
    EXP: dict(table=FACTORIAL, alternating=False, stride=1, offset=0,
              square_first=False, factorial=True, final_mul=False),
    SIN: dict(table=FACTORIAL, alternating=True, stride=2, offset=1,
              square_first=True, factorial=True, final_mul=True),
    COS: dict(table=FACTORIAL, alternating=True, stride=2, offset=0,
              square_first=True, factorial=True, final_mul=False),
    SINH: dict(table=FACTORIAL, alternating=False, stride=2, offset=1,
               square_first=True, factorial=True, final_mul=True),
}

#: argument bound of the kernels: X <= 2^-4
_XMAX = Fraction(1, 16)


class _Abstract:
    """One abstract execution of a kernel for a fixed N."""

    def __init__(self, kind, limb_bits, table, N, trace=None, power_cache=None):
        self.p = _KIND_PARAMS[kind]
        self.kind = kind
        self.bits = limb_bits
        self.table = table
        self.N = N
        self.hbits = 4 if not self.p["square_first"] else 8
        self.F = self.hbits * (_DEG_CAP + 2)
        self.ulpb = Fraction(1, 1 << limb_bits)
        self.checks = 0
        self.trace = trace
        self.power_cache = power_cache

    def _cap_scaled(self, den, intbits):
        """(2^intbits - 2^-B) * den * 2^F as an integer."""
        return den * ((1 << (intbits + self.bits)) - 1) << (self.F - self.bits)

    # --- checks -------------------------------------------------------

    def _record(self, label, k, value):
        if self.trace is not None:
            lo, hi = value.stored_range(self.hbits, self.F, self.ulpb)
            self.trace.append((self.N, label, k, lo, hi, value.err))

    def _check_window(self, label, k, value, intbits):
        """Stored |value| fits below 2^intbits - ulp."""
        self.checks += 1
        lo, hi = value.stored_scaled(self.hbits, self.F, self.bits)
        if max(-lo, hi) > self._cap_scaled(value.den, intbits):
            raise _CheckFailure(
                "%s at N=%d k=%d: |S| can reach %s" %
                (label, self.N, k,
                 float(Fraction(max(-lo, hi), value.den << self.F))))
        return lo, hi

    def _check_nonneg(self, label, k, value):
        self.checks += 1
        lo, _ = value.stored_scaled(self.hbits, self.F, self.bits)
        if lo < 0:
            raise _CheckFailure(
                "%s at N=%d k=%d: S can be negative (%s)" %
                (label, self.N, k, float(Fraction(lo, value.den << self.F))))

    # --- abstract operations -------------------------------------------

    def _mul_trunc(self, a, b, label, k):
        """Truncating product of canonical values: errors follow
        |Y| e1 + |X| e2 + e1 e2 ulp + 1."""
        slo_a, shi_a = a.stored_scaled(self.hbits, self.F, self.bits)
        slo_b, shi_b = b.stored_scaled(self.hbits, self.F, self.bits)
        ma = _up_dyadic(Fraction(max(-slo_a, shi_a), a.den << self.F))
        mb = _up_dyadic(Fraction(max(-slo_b, shi_b), b.den << self.F))
        poly = {}
        for d1, c1 in a.poly.items():
            for d2, c2 in b.poly.items():
                poly[d1 + d2] = poly.get(d1 + d2, 0) + c1 * c2
        out = AbstractValue(poly, a.den * b.den)
        if a.slo or a.shi or b.slo or b.shi:
            alo, ahi = a.true_range(self.hbits, self.F)
            blo, bhi = b.true_range(self.hbits, self.F)
            ca = (alo * b.slo, alo * b.shi, ahi * b.slo, ahi * b.shi)
            cb = (blo * a.slo, blo * a.shi, bhi * a.slo, bhi * a.shi)
            cab = (a.slo * b.slo, a.slo * b.shi, a.shi * b.slo, a.shi * b.shi)
            out.slo = _down_dyadic(min(ca) + min(cb) + min(cab))
            out.shi = _up_dyadic(max(ca) + max(cb) + max(cab))
        out.err = _up_dyadic(mb * a.err + ma * b.err
                             + a.err * b.err * self.ulpb + 1)
        out.fold(self.hbits)
        self._record(label, k, out)
        return out

    def _powers(self, m):
        """Abstract power table T[1..m]; cacheable (it depends only on
        the splitting parameter, not on N or the tables)."""
        if self.power_cache is not None and m in self.power_cache:
            return self.power_cache[m]
        T = [None] * (m + 1)
        if self.p["square_first"]:
            T[1] = AbstractValue({1: 1}, err=_ONE)
        else:
            T[1] = AbstractValue({1: 1})
        if m >= 2:
            T[2] = self._mul_trunc(T[1], T[1], "power", 2)
        k = 4
        while k <= m:
            T[k - 1] = self._mul_trunc(T[k // 2], T[k // 2 - 1], "power", k - 1)
            T[k] = self._mul_trunc(T[k // 2], T[k // 2], "power", k)
            k += 2
        if self.power_cache is not None:
            self.power_cache[m] = T
        return T

    def run(self):
        """Replays the kernel loop; returns the final error bound."""
        p = self.p
        u, v = self.table.u, self.table.v
        N = self.N
        m = _splitting_param(N)
        T = self._powers(m)
        S = AbstractValue()
        alternating = p["alternating"]
        stride, offset = p["stride"], p["offset"]
        for k in range(N - 1, -1, -1):
            j = stride * k + offset
            jn = j + stride
            if k < N - 1 and v[j] != v[jn]:
                self._record("change", k, S)
                # the sign-tested shift branch needs |S| within half the
                # integral limb so the top bit discriminates the sign
                lo, hi = self._check_window("change", k, S, self.bits - 1)
                scale = S.den << self.F
                if lo < 0:
                    self.checks += 1
                    if v[jn] * scale + lo < 0:
                        raise _CheckFailure(
                            "change at N=%d k=%d: shift v=%d cannot clear "
                            "S" % (self.N, k, v[jn]))
                if not p["factorial"]:
                    # multiply input: S itself (nonneg branch) or S+v_old
                    self.checks += 1
                    top = max(hi, v[jn] * scale if lo < 0 else 0)
                    if top * v[j] > self._cap_scaled(S.den, 2 * self.bits):
                        raise _CheckFailure(
                            "change at N=%d k=%d: S*v needs more than two "
                            "integral limbs" % (self.N, k))
                    S = AbstractValue({d: c * v[j] for d, c in S.poly.items()},
                                      S.den,
                                      _down_dyadic(S.slo * v[j]),
                                      _up_dyadic(S.shi * v[j]),
                                      _up_dyadic(S.err * v[j]))
                S = AbstractValue(S.poly, S.den * v[jn], S.slo / v[jn],
                                  S.shi / v[jn],
                                  _up_dyadic(S.err / v[jn] + 1))
                self._check_window("post-change", k, S, self.bits)
            c = u[j]
            sign = -1 if (alternating and (k & 1)) else 1
            if k % m == 0:
                S.poly[0] = S.poly.get(0, 0) + sign * c * S.den
                if k:
                    self._record("horner", k, S)
                    self._check_nonneg("horner", k, S)
                    self._check_window("horner", k, S, self.bits)
                    S = self._mul_trunc(S, T[m], "horner", k)
            else:
                t = T[k % m]
                d = k % m
                # fused exact addmul: u*T has error u * err_T
                S.poly[d] = S.poly.get(d, 0) + sign * c * S.den
                if t.slo or t.shi:
                    tslo, tshi = sign * c * t.slo, sign * c * t.shi
                    S.slo = _down_dyadic(S.slo + min(tslo, tshi))
                    S.shi = _up_dyadic(S.shi + max(tslo, tshi))
                S.err = _up_dyadic(S.err + c * t.err)
        self._record("final-div", 0, S)
        self._check_nonneg("final-div", 0, S)
        self._check_window("final-div", 0, S, self.bits)
        S = AbstractValue(S.poly, S.den * v[offset], S.slo / v[offset],
                          S.shi / v[offset],
                          _up_dyadic(S.err / v[offset] + 1))
        if p["final_mul"]:
            self._record("final-mul", 0, S)
            self._check_nonneg("final-mul", 0, S)
            _, shi = S.stored_scaled(self.hbits, self.F, self.bits)
            err = _up_dyadic(_XMAX * S.err + 1)  # X itself is exact
            self.checks += 1
            # result * X must fit n fractional limbs: mag/16 < 1 - ulp
            if shi > 16 * self._cap_scaled(S.den, 0):
                raise _CheckFailure("final-mul at N=%d: result cannot fit n "
                                    "fractional limbs" % self.N)
            return err
        self.checks += 1
        _, shi = S.stored_scaled(self.hbits, self.F, self.bits)
        if shi > self._cap_scaled(S.den, self.bits):
            raise _CheckFailure("final at N=%d: result exceeds one integral "
                                "limb" % self.N)
        return S.err


def check_table_identities(table):
    """Exact cross-check that the tables encode the series coefficients.

    odd: u_k * (2k+1) == v_k, v_k fits a limb, and every block is
    maximal (extending it would overflow).
    factorial: v_k telescopes k! across blocks and u_k * k! equals
    v_k times the product of the earlier distinct denominators.
    """
    from math import lcm

    limit = (1 << table.limb_bits) - 1
    u, v = table.u, table.v
    starts = [0] + [b + 1 for b in table.breaks]
    if table.kind == ODD:
        for k in range(len(u)):
            if u[k] * (2 * k + 1) != v[k] or not (0 < v[k] <= limit):
                return "odd identity fails at k=%d" % k
        for s in starts:
            k = s
            while k < len(u) and v[k] == v[s]:
                k += 1
            if k < len(u) and lcm(v[s], 2 * k + 1) <= limit:
                return "odd block at k=%d is not maximal" % s
    else:
        prior = 1  # product of distinct earlier denominators
        for i, s in enumerate(starts):
            end = table.breaks[i] if i < len(table.breaks) else len(u) - 1
            blockv = v[s]
            prod = 1
            for t in range(s, end + 1):
                prod *= max(t, 1)
            if prod != blockv or blockv > limit:
                return "factorial block [%d..%d] product mismatch" % (s, end)
            for k in range(s, end + 1):
                # u_k = blockv * prior / k!, exactly
                num = blockv * prior
                if num % factorial(k) or u[k] != num // factorial(k):
                    return "factorial identity fails at k=%d" % k
            if end + 1 < len(u) and blockv * (end + 1) <= limit:
                return "factorial block at k=%d is not maximal" % s
            prior *= blockv
    return None


def prove_series(kind, limb_bits, table=None, N_max=300, trace=None):
    """Abstractly execute one kernel for every N in 3..N_max.

    Returns a ProofReport; a violated bound is reported (with the first
    offending N and check site), not raised.
    """
    if table is None:
        table = denom_table(_KIND_PARAMS[kind]["table"], limb_bits)
    report = ProofReport(kind, limb_bits, 3, N_max)
    bad = check_table_identities(table)
    if bad is not None:
        report.failure = "table cross-check: " + bad
        return report
    need = _KIND_PARAMS[kind]["stride"] * (N_max - 1) + \
        _KIND_PARAMS[kind]["offset"] + _KIND_PARAMS[kind]["stride"] + 1
    if len(table) < need:
        report.failure = "table too short (%d < %d)" % (len(table), need)
        return report
    power_cache = {} if trace is None else None
    for N in range(3, N_max + 1):
        runner = _Abstract(kind, limb_bits, table, N, trace=trace,
                           power_cache=power_cache)
        try:
            err = runner.run()
        except _CheckFailure as e:
            report.failure = str(e)
            report.checks += runner.checks
            return report
        report.checks += runner.checks
        report.per_n_error[N] = err
        if err > report.max_error:
            report.max_error = err
            report.max_error_n = N
        if err > 2:
            report.failure = "final error bound %s ulp > 2 at N=%d" % (
                float(err), N)
            return report
    return report


def prove_all(N_max=300):
    """Proof reports for the five public series kinds at both limb sizes."""
    reports = []
    for kind in SERIES_KINDS:
        for bits in (32, 64):
            reports.append(prove_series(kind, bits, N_max=N_max))
    return reports

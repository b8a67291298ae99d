"""Series kernels against exact big-rational oracles.

Two independent routes are compared: (a) the closed-form truncated sum
evaluated in exact rational arithmetic, (b) the kernel's own recurrence
replayed in exact rational arithmetic with no truncation.  Both must
agree exactly; the fixed-point kernel must then match within 2 ulp.
"""

import math
import random
from fractions import Fraction

import pytest

import ballmath.series as series
from oracles import exact_sum, replay_recurrence
from ballmath.fixedpoint import FixedPoint
from ballmath.series import (ATAN, ATANH, COS, EXP, FACTORIAL, ODD, SIN,
                             denom_table, eval_atan_series,
                             eval_atanh_series, eval_exp_series,
                             eval_sin_cos_series, eval_sinh_series,
                             gen_denom_table, _splitting_param)


KINDS = [ATAN, ATANH, EXP, SIN, COS, "sinh"]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("bits", [32, 64])
def test_recurrence_matches_closed_form_exactly(kind, bits):
    table = denom_table(FACTORIAL if kind in (EXP, SIN, COS, "sinh") else ODD,
                        bits)
    rng = random.Random(hash((kind, bits)) & 0xFFFF)
    for N in [3, 4, 5, 17, 64, 299]:
        x = Fraction(rng.randrange(1 << 24), 1 << 28)  # <= 2^-4
        assert replay_recurrence(kind, x, N, table) == exact_sum(kind, x, N)


def run_kernel(kind, x, N, bits, n):
    table = denom_table(FACTORIAL if kind in (EXP, SIN, COS, "sinh") else ODD,
                        bits)
    if kind == ATAN:
        return eval_atan_series(x, N, table)
    if kind == ATANH:
        return eval_atanh_series(x, N, table)
    if kind == EXP:
        return eval_exp_series(x, N, table)
    if kind == SIN:
        return eval_sin_cos_series(x, N, table, want="sin")[0]
    if kind == COS:
        return eval_sin_cos_series(x, N, table, want="cos")[1]
    if kind == "sinh":
        return eval_sinh_series(x, N, table)
    raise ValueError(kind)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("bits,n", [(64, 1), (64, 2), (64, 4), (32, 2), (32, 5)])
def test_kernels_within_2ulp_of_exact(kind, bits, n):
    rng = random.Random(hash((kind, bits, n)) & 0xFFFFFF)
    ulp = Fraction(1, 1 << (bits * n))
    wide = bits * n > 128
    # at wide widths, keep the oracle's rationals manageable: fewer
    # terms and arguments with 48 significant bits (the full-entropy
    # truncation behavior is already covered by the narrow widths)
    term_counts = [3, 4, 5, 8, 13, 50] if wide else [3, 4, 5, 8, 13, 50, 150, 299]
    for N in term_counts:
        for _ in range(4):
            if wide:
                xv = rng.randrange(0, (1 << 48) + 1) << (bits * n - 52)
            else:
                xv = rng.randrange(0, (1 << (bits * n - 4)) + 1)
            x = FixedPoint(xv, n, 0, bits)
            got = run_kernel(kind, x, N, bits, n).to_fraction()
            want = exact_sum(kind, Fraction(xv, 1 << (bits * n)), N)
            assert abs(want - got) <= 2 * ulp, (kind, bits, n, N)


@pytest.mark.parametrize("kind", KINDS)
def test_kernel_zero_argument(kind):
    bits, n = 64, 3
    x = FixedPoint(0, n, 0, bits)
    got = run_kernel(kind, x, 5, bits, n)
    if kind in (EXP, COS):
        assert got.to_fraction() == 1
    else:
        assert got.val == 0


def test_sin_cos_shared_power_table_and_pythagoras():
    bits, n = 64, 3
    table = denom_table(FACTORIAL, bits)
    rng = random.Random(2024)
    for _ in range(50):
        xv = rng.randrange(0, 1 << (bits * n - 5))
        x = FixedPoint(xv, n, 0, bits)
        s, c = eval_sin_cos_series(x, 25, table)
        ss, cc = s.to_fraction(), c.to_fraction()
        ulp = Fraction(1, 1 << (bits * n))
        # tails beyond N=25 are far below 1 ulp at this argument size
        assert abs(ss * ss + cc * cc - 1) <= 8 * ulp


def test_atanh_monotone_in_terms():
    bits, n = 64, 2
    table = denom_table(ODD, bits)
    x = FixedPoint(1 << (bits * n - 6), n, 0, bits)
    prev = None
    for N in range(3, 12):
        cur = eval_atanh_series(x, N, table).to_fraction()
        if prev is not None:
            assert cur >= prev - 4 * Fraction(1, 1 << (bits * n))
        prev = cur


def test_power_table_accuracy():
    bits, n = 64, 2
    rng = random.Random(8)
    ulp = Fraction(1, 1 << (bits * n))
    for _ in range(200):
        xv = rng.randrange(0, 1 << (bits * n - 4))
        xq = Fraction(xv, 1 << (bits * n))
        T = series._power_table(xv, n, bits, 8, True)
        for k in range(1, 9):
            tk = Fraction(T[k], 1 << (bits * n))
            assert abs(tk - xq ** (2 * k)) <= k * ulp


def test_checked_mode_asserts_canonical_ranges():
    series.CHECKED = True
    try:
        bits, n = 64, 2
        table = denom_table(ODD, bits)
        rng = random.Random(10)
        for _ in range(20):
            xv = rng.randrange(0, 1 << (bits * n - 4))
            eval_atan_series(FixedPoint(xv, n, 0, bits), 299, table)
    finally:
        series.CHECKED = False


def test_determinism():
    bits, n = 64, 2
    table = denom_table(ODD, bits)
    x = FixedPoint(12345678901234567, n, 0, bits)
    a = eval_atan_series(x, 100, table)
    b = eval_atan_series(x, 100, table)
    assert a == b


def test_preconditions_rejected():
    bits, n = 64, 2
    table = denom_table(ODD, bits)
    big = FixedPoint(1 << (bits * n - 3), n, 0, bits)  # 2^-3 > 2^-4
    with pytest.raises(AssertionError):
        eval_atan_series(big, 10, table)
    ok = FixedPoint(1, n, 0, bits)
    with pytest.raises(AssertionError):
        eval_atan_series(ok, 2, table)
    with pytest.raises(AssertionError):
        eval_atan_series(ok, 300, table)

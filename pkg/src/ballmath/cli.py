"""
Command-line front end.

    ballmath eval FUNCTION X P        evaluate one point
    ballmath eval FUNCTION --batch F  evaluate `p x_hex` lines from a file
    ballmath bench                    timing ladder, CSV on stdout
    ballmath gen-tables [--dump]      regenerate tables, optionally dump
    ballmath verify [all|tables|series]
    ballmath selftest                 quick end-to-end sanity pass

Exit status: 0 success, 1 verification/containment failure, 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import argtables
from .argtables import (BAND_PRECISION, ECONOMICAL, FAST, FUNCTIONS,
                        TABLE_SPECS, dump_constants, dump_table,
                        gen_argred_table, gen_constants, verify_tables)
from .bigfloat import BigFloat, parse_number
from .errors import BallmathError
from .functions import (atan_ball, cos_ball, exp_ball, log_ball, sin_ball)
from .prover import prove_all

_EVAL = {
    "exp": exp_ball,
    "sin": sin_ball,
    "cos": cos_ball,
    "log": log_ball,
    "atan": atan_ball,
}

#: benchmark input near sqrt(2) + 1, the slowest reduction path
_BENCH_X = BigFloat.from_man_exp(math.isqrt(2 << 200) + (1 << 100), -100)

_BENCH_LADDER = (32, 53, 64, 128, 256, 512, 1024, 2048, 4096)


def _digits_for(p):
    return max(2, int(p * 0.30103) + 2)


def cmd_eval(args):
    fn = _EVAL[args.function]
    if args.batch:
        with open(args.batch) as f:
            lines = [ln.split() for ln in f if ln.strip()
                     and not ln.startswith("#")]
        for parts in lines:
            p, xs = int(parts[0]), parts[1]
            ball = fn(parse_number(xs), p)
            print("%d %s %s %s" % (p, xs, ball.mid.hex_str(),
                                   ball.rad.hex_str()))
        return 0
    p = args.precision
    x = parse_number(args.x)
    ball = fn(x, p)
    print("mid=%s (%s) rad=%s" % (ball.mid.hex_str(),
                                  ball.mid.decimal_str(_digits_for(p)),
                                  ball.rad.hex_str()))
    return 0


def _time_one(fn, x, p, min_time, reps):
    best = None
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        calls = 0
        while True:
            fn(x, p)
            calls += 1
            dt = time.perf_counter_ns() - t0
            if dt >= min_time * 1e9:
                break
        per_call = dt / calls
        if best is None or per_call < best:
            best = per_call
    return best


def cmd_bench(args):
    functions = args.functions.split(",") if args.functions else FUNCTIONS
    precisions = ([int(s) for s in args.precisions.split(",")]
                  if args.precisions else _BENCH_LADDER)
    x = parse_number(args.input) if args.input else _BENCH_X
    print("function,precision_bits,ns_per_call")
    for name in functions:
        fn = _EVAL[name]
        for p in precisions:
            ns = _time_one(fn, x, p, args.min_time, args.reps)
            print("%s,%d,%.1f" % (name, p, ns))
    return 0


def cmd_gen_tables(args):
    bands = [FAST, ECONOMICAL] if args.band == "all" else [args.band]
    for band in bands:
        dumps = []
        for fn in FUNCTIONS:
            t = gen_argred_table(fn, band)
            dumps.append(dump_table(t))
            print("generated %s/%s: %s entries, %.4f KiB" %
                  (fn, band, "+".join(str(c) for c in t.counts),
                   t.payload_kib()), file=sys.stderr)
        text = "".join(dumps)
        if args.dump:
            sys.stdout.write(text)
        if args.write:
            import os

            path = os.path.join(args.write, argtables._DATA_FILES[band])
            with open(path, "w") as f:
                f.write(text)
            print("wrote %s" % path, file=sys.stderr)
    if args.constants:
        text = dump_constants(gen_constants())
        if args.dump:
            sys.stdout.write(text)
        if args.write:
            import os

            path = os.path.join(args.write, "constants.txt")
            with open(path, "w") as f:
                f.write(text)
            print("wrote %s" % path, file=sys.stderr)
    return 0


def _verify_series():
    failures = 0
    for rep in prove_all():
        print(rep.summary())
        if not rep.passed:
            failures += 1
    return failures


def _verify_tables(golden_dir):
    import os

    failures = 0
    for band, fname in (("fast", "golden_argtables_fast.txt"),
                        ("economical", "golden_argtables_econ.txt")):
        path = os.path.join(golden_dir, fname)
        if not os.path.exists(path):
            print("tables/%s: MISSING golden file %s" % (band, path))
            failures += 1
            continue
        with open(path) as f:
            try:
                mismatches = verify_tables(f.read(), band)
            except ValueError as e:
                print("tables/%s: ERROR %s" % (band, e))
                failures += 1
                continue
        for msg in mismatches[:20]:
            print("tables/%s: MISMATCH %s" % (band, msg))
        failures += len(mismatches)
        print("tables/%s: %d entries checked, %d mismatches, %s" %
              (band, sum(sum(TABLE_SPECS[(f, band)][2]) for f in FUNCTIONS),
               len(mismatches), "PASS" if not mismatches else "FAIL"))
    return failures


def cmd_verify(args):
    failures = 0
    if args.what in ("all", "series"):
        failures += _verify_series()
    if args.what in ("all", "tables"):
        import os

        golden = args.golden_dir
        if golden is None:
            from importlib import resources

            golden = str(resources.files("ballmath").joinpath("data"))
        failures += _verify_tables(golden)
    return 0 if failures == 0 else 1


def cmd_selftest(args):
    """Structure checks plus a double-precision consistency sweep."""
    import random

    failures = 0
    total_bits = argtables.total_payload_bits()
    ok = total_bits <= 256 * 1024 * 8
    print("table payload: %.4f KiB %s" % (total_bits / 8192.0,
                                          "PASS" if ok else "FAIL"))
    failures += 0 if ok else 1
    for rep in prove_all(N_max=60):
        if not rep.passed:
            print(rep.summary())
            failures += 1
    print("series prover (N <= 60): %s" % ("PASS" if not failures else "FAIL"))
    rng = random.Random(1)
    bad = 0
    for _ in range(200):
        name = rng.choice(FUNCTIONS)
        x = BigFloat.from_man_exp(rng.randrange(1, 1 << 53),
                                  rng.randint(-30, 20))
        if name == "log" and x.sign < 0:
            continue
        p = rng.randint(8, 256)
        try:
            a = _EVAL[name](x, p)
            b = _EVAL[name](x, p + 32)
        except BallmathError:
            continue
        if not a.intersects(b) or b.width() > a.width():
            bad += 1
    print("double evaluation (200 random): %d failures %s" %
          (bad, "PASS" if bad == 0 else "FAIL"))
    failures += bad
    return 0 if failures == 0 else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="ballmath")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a function to a ball")
    pe.add_argument("function", choices=sorted(_EVAL))
    pe.add_argument("x", nargs="?", help="decimal or hex-float input")
    pe.add_argument("precision", nargs="?", type=int)
    pe.add_argument("--batch", help="file of `p x_hex` lines")
    pe.set_defaults(fn=cmd_eval)

    pb = sub.add_parser("bench", help="timing ladder, CSV")
    pb.add_argument("--functions", help="comma-separated subset")
    pb.add_argument("--precisions", help="comma-separated bit counts")
    pb.add_argument("--input", help="override the benchmark input")
    pb.add_argument("--min-time", type=float, default=0.1)
    pb.add_argument("--reps", type=int, default=3)
    pb.set_defaults(fn=cmd_bench)

    pg = sub.add_parser("gen-tables", help="regenerate lookup tables")
    pg.add_argument("--band", choices=[FAST, ECONOMICAL, "all"],
                    default="all")
    pg.add_argument("--dump", action="store_true",
                    help="write the table dump to stdout")
    pg.add_argument("--write", metavar="DIR",
                    help="write data files into DIR")
    pg.add_argument("--constants", action="store_true",
                    help="also regenerate the constant pool")
    pg.set_defaults(fn=cmd_gen_tables)

    pv = sub.add_parser("verify", help="run the series prover / table audit")
    pv.add_argument("what", nargs="?", choices=["all", "tables", "series"],
                    default="all")
    pv.add_argument("--golden-dir", help="directory with golden table dumps")
    pv.set_defaults(fn=cmd_verify)

    ps = sub.add_parser("selftest", help="quick sanity pass")
    ps.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "eval" and not args.batch:
        if args.x is None or args.precision is None:
            print("eval requires X and PRECISION (or --batch)",
                  file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except BallmathError as e:
        print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 1
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

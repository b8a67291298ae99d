"""
Oracle command line.

    ballmath-oracle gen FUNCTION COUNT SEED [-o FILE]
    ballmath-oracle check VECTORS RESULTS
    ballmath-oracle audit DUMPFILE [--constants CONSTFILE]
    ballmath-oracle full-audit [--count N] [--seed S] [--workdir DIR]

`full-audit` drives the installed `ballmath` CLI end to end: vectors
for all five functions, batch evaluation, containment checking, and the
table audit against `gen-tables --dump`.
"""

import argparse
import os
import subprocess
import sys
import tempfile
import time

from .audit import audit_constants_dump, audit_table_dump, parse_dump
from .vectors import FUNCTIONS, check_containment, gen_vectors


def cmd_gen(args):
    text = gen_vectors(args.function, args.count, args.seed)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args):
    with open(args.vectors) as f:
        vtext = f.read()
    with open(args.results) as f:
        rtext = f.read()
    rep = check_containment(vtext, rtext)
    for msg in rep["failures"][:50]:
        print("FAIL %s" % msg)
    print("%s: %d/%d contained, %d radius checks, %s"
          % (rep["function"], rep["contained"], rep["total"],
             rep["radius_checked"],
             "PASS" if not rep["failures"] else "FAIL"))
    return 0 if not rep["failures"] else 1


def cmd_audit(args):
    with open(args.dump) as f:
        mismatches, rederived = audit_table_dump(f.read())
    for msg in mismatches[:50]:
        print("MISMATCH %s" % msg)
    with open(args.dump) as f:
        identical = f.read() == rederived
    print("table audit: %d mismatches, re-derived dump %s"
          % (len(mismatches), "byte-identical" if identical else "DIFFERS"))
    rc = 0 if not mismatches and identical else 1
    if args.constants:
        with open(args.constants) as f:
            cmis = audit_constants_dump(f.read())
        for msg in cmis:
            print("MISMATCH %s" % msg)
        print("constants audit: %d mismatches" % len(cmis))
        rc = rc or (1 if cmis else 0)
    if args.save_rederived:
        with open(args.save_rederived, "w") as f:
            f.write(rederived)
    return rc


def _ballmath(*argv):
    proc = subprocess.run([sys.executable, "-m", "ballmath.cli", *argv],
                          capture_output=True, text=True)
    if proc.returncode not in (0,):
        raise RuntimeError("ballmath %s failed:\n%s" % (argv[0], proc.stderr))
    return proc.stdout


def cmd_full_audit(args):
    workdir = args.workdir or tempfile.mkdtemp(prefix="ballmath-audit-")
    os.makedirs(workdir, exist_ok=True)
    failures = 0
    t0 = time.time()
    for fn in FUNCTIONS:
        vpath = os.path.join(workdir, "vectors_%s.txt" % fn)
        rpath = os.path.join(workdir, "results_%s.txt" % fn)
        t1 = time.time()
        with open(vpath, "w") as f:
            gen_vectors(fn, args.count, args.seed, out=f)
        with open(vpath) as f:
            batch_in = [" ".join(ln.split()[:2]) for ln in f
                        if ln.strip() and not ln.startswith("#")]
        bpath = os.path.join(workdir, "batch_%s.txt" % fn)
        with open(bpath, "w") as f:
            f.write("\n".join(batch_in) + "\n")
        out = _ballmath("eval", fn, "--batch", bpath)
        with open(rpath, "w") as f:
            f.write(out)
        with open(vpath) as f:
            rep = check_containment(f.read(), out)
        print("%s: %d/%d contained, %d radius checks, %.1f s, %s"
              % (fn, rep["contained"], rep["total"], rep["radius_checked"],
                 time.time() - t1,
                 "PASS" if not rep["failures"] else "FAIL"))
        for msg in rep["failures"][:20]:
            print("  FAIL %s" % msg)
        failures += len(rep["failures"])
    for band in ("fast", "economical"):
        dump = _ballmath("gen-tables", "--band", band, "--dump")
        mismatches, rederived = audit_table_dump(dump)
        identical = dump == rederived
        entries = sum(len(s) for t in parse_dump(dump) for s in t["entries"])
        print("tables/%s: %d entries, %d mismatches, re-derived dump %s"
              % (band, entries, len(mismatches),
                 "byte-identical" if identical else "DIFFERS"))
        failures += len(mismatches) + (0 if identical else 1)
    print("full audit: %s in %.1f s (workdir %s)"
          % ("PASS" if failures == 0 else "%d FAILURES" % failures,
             time.time() - t0, workdir))
    return 0 if failures == 0 else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="ballmath-oracle")
    sub = ap.add_subparsers(dest="command", required=True)

    pg = sub.add_parser("gen", help="write golden vectors")
    pg.add_argument("function", choices=sorted(FUNCTIONS))
    pg.add_argument("count", type=int)
    pg.add_argument("seed", type=int)
    pg.add_argument("-o", "--output")
    pg.set_defaults(fn=cmd_gen)

    pc = sub.add_parser("check", help="containment check of results")
    pc.add_argument("vectors")
    pc.add_argument("results")
    pc.set_defaults(fn=cmd_check)

    pa = sub.add_parser("audit", help="re-derive a table dump")
    pa.add_argument("dump")
    pa.add_argument("--constants")
    pa.add_argument("--save-rederived")
    pa.set_defaults(fn=cmd_audit)

    pf = sub.add_parser("full-audit", help="drive the ballmath CLI end to end")
    pf.add_argument("--count", type=int, default=100_000)
    pf.add_argument("--seed", type=int, default=20260809)
    pf.add_argument("--workdir")
    pf.set_defaults(fn=cmd_full_audit)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

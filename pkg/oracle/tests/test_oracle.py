"""Oracle self-tests plus a scaled-down end-to-end audit of the primary
implementation through its command line."""

import subprocess
import sys
from fractions import Fraction

import pytest

from ballmath_oracle import (audit_constants_dump, audit_table_dump,
                             check_containment, format_hex, gen_vectors,
                             parse_hex)
from ballmath_oracle.audit import parse_dump, render_dump
from ballmath_oracle.vectors import reference


def ballmath(*argv):
    proc = subprocess.run([sys.executable, "-m", "ballmath.cli", *argv],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_hexfloat_round_trip():
    import random

    rng = random.Random(9)
    for _ in range(3000):
        q = Fraction(rng.randrange(1, 1 << 100),
                     1 << rng.randint(0, 200)) * rng.choice([1, -1])
        assert parse_hex(format_hex(q)) == q
    assert format_hex(Fraction(3)) == "0x1.8p+1"
    assert parse_hex("0x1.8p+1") == 3


def test_vector_generation_deterministic():
    a = gen_vectors("atan", 25, 42)
    b = gen_vectors("atan", 25, 42)
    assert a == b
    assert a.splitlines()[0].startswith("# ballmath-oracle vectors v1 atan 25")
    # x = 1 is always present for atan
    assert any(ln.split()[1] == "0x1p+0" for ln in a.splitlines()[1:])


def test_reference_self_check():
    # reference values agree with a direct high-precision evaluation
    import mpmath

    y = reference("exp", Fraction(11, 32), 100)
    mpmath.mp.prec = 300
    ref = mpmath.exp(mpmath.mpf(11) / 32)
    diff = abs(ref - mpmath.mpf(y.numerator) / y.denominator)
    assert diff < mpmath.mpf(2) ** -160


def test_check_containment_flags_bad_midpoints():
    vecs = gen_vectors("atan", 5, 7)
    lines = []
    for ln in vecs.splitlines()[1:]:
        p, x, yref = ln.split()
        lines.append("%s %s %s %s" % (p, x, yref, "0x0p+0"))
    ok = check_containment(vecs, "\n".join(lines) + "\n")
    assert ok["failures"] == []
    # perturb one midpoint by several ulp while keeping a tiny radius
    p, x, yref = vecs.splitlines()[1].split()
    off = parse_hex(yref) * Fraction(1, 1 << (int(p) - 2))
    bad_mid = format_hex(parse_hex(yref) + off)
    lines[0] = "%s %s %s %s" % (p, x, bad_mid, "0x0p+0")
    bad = check_containment(vecs, "\n".join(lines) + "\n")
    assert len(bad["failures"]) == 1


def test_check_containment_format_errors():
    vecs = gen_vectors("exp", 3, 1)
    with pytest.raises(ValueError):
        check_containment(vecs, "1 0x1p+0 0x1p+0 0x0p+0\n")
    with pytest.raises(ValueError):
        check_containment("no header\n", "")


def test_table_audit_fast_band():
    dump = ballmath("gen-tables", "--band", "fast", "--dump")
    mismatches, rederived = audit_table_dump(dump)
    assert mismatches == []
    assert rederived == dump  # byte-identical re-derivation
    # a one-ulp perturbation is caught
    tables = parse_dump(dump)
    man, exp = tables[0]["entries"][0][3]
    tables[0]["entries"][0][3] = (man + 1, exp)
    bad, _ = audit_table_dump(render_dump(tables))
    assert len(bad) == 1


@pytest.mark.slow
def test_table_audit_economical_band():
    dump = ballmath("gen-tables", "--band", "economical", "--dump")
    mismatches, rederived = audit_table_dump(dump)
    assert mismatches == []
    assert rederived == dump


def test_constants_audit():
    out = subprocess.run([sys.executable, "-c",
                          "from ballmath.argtables import dump_constants, "
                          "load_constants; "
                          "print(dump_constants(load_constants()), end='')"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert audit_constants_dump(out.stdout) == []


@pytest.mark.parametrize("function", ["exp", "sin", "cos", "log", "atan"])
def test_end_to_end_containment_small(function, tmp_path):
    count = 150
    vpath = tmp_path / ("v_%s.txt" % function)
    vpath.write_text(gen_vectors(function, count, 20260809))
    batch = "\n".join(" ".join(ln.split()[:2])
                      for ln in vpath.read_text().splitlines()
                      if not ln.startswith("#")) + "\n"
    bpath = tmp_path / "batch.txt"
    bpath.write_text(batch)
    results = ballmath("eval", function, "--batch", str(bpath))
    rep = check_containment(vpath.read_text(), results)
    assert rep["failures"] == [], rep["failures"][:5]
    assert rep["contained"] == count
    assert rep["radius_checked"] > 0


def test_oracle_cli_gen_and_check(tmp_path):
    vec = tmp_path / "v.txt"
    rc = subprocess.run([sys.executable, "-m", "ballmath_oracle.cli", "gen",
                         "atan", "10", "5", "-o", str(vec)],
                        capture_output=True, text=True)
    assert rc.returncode == 0 and vec.exists()
    batch = "\n".join(" ".join(ln.split()[:2])
                      for ln in vec.read_text().splitlines()
                      if not ln.startswith("#")) + "\n"
    bpath = tmp_path / "b.txt"
    bpath.write_text(batch)
    res = tmp_path / "r.txt"
    res.write_text(ballmath("eval", "atan", "--batch", str(bpath)))
    rc = subprocess.run([sys.executable, "-m", "ballmath_oracle.cli", "check",
                         str(vec), str(res)], capture_output=True, text=True)
    assert rc.returncode == 0 and "PASS" in rc.stdout

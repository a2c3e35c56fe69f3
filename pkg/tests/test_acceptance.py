"""The eleven acceptance criteria, one test each.

Each test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import os
import subprocess
import sys
import time

import pytest

import conftest
from spindlehom.verify import SPECTRAL_FIXTURES, run_verify


def _report(num, title, ok, detail):
    line = f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    conftest.ACCEPTANCE[num] = line
    print(line)
    return ok


def _suite(num, title, selectors, **kw):
    t0 = time.perf_counter()
    entries = run_verify(selectors, **kw)
    dt = time.perf_counter() - t0
    bad = [e for e in entries if not e.ok]
    n_pass = sum(e.status == "pass" for e in entries)
    n_vac = sum(e.status == "vacuous" for e in entries)
    detail = f"{n_pass} pass, {len(bad)} fail, {n_vac} vacuous, {dt:.1f}s"
    ok = bool(entries) and not bad
    _report(num, title, ok, detail)
    assert entries
    assert not bad, [(e.case, e.detail) for e in bad[:5]]
    return dt


def test_criterion_01_axioms():
    _suite(1, "presimplicial relations, square zero, anticommutation", ["axioms"])


def test_criterion_02_splitting():
    _suite(2, "H = HN + HD over Z with torsion", ["splitting"])


def test_criterion_03_late_splitting():
    _suite(3, "late splitting and the doubling isomorphism", ["late-splitting"])


def test_criterion_04_homotopy():
    _suite(4, "homotopy identity for every weight", ["homotopy"])


def test_criterion_05_spectral():
    times = {}
    bad = []
    for name in SPECTRAL_FIXTURES:
        t0 = time.perf_counter()
        entries = run_verify(["spectral"], structures=[name])
        times[name] = time.perf_counter() - t0
        assert entries, name
        bad += [e for e in entries if not e.ok]
    slow = [n for n, t in times.items() if t > 60]
    detail = ", ".join(f"{n} {t:.1f}s" for n, t in times.items())
    _report(5, "E1, E2, E-infinity over Q and F2", not bad and not slow, detail)
    assert not bad, [e.case for e in bad]
    assert not slow


def test_criterion_06_one_term():
    _suite(6, "one-term isomorphism ledger and decomposition", ["one-term-iso"])


def test_criterion_07_recursive_count():
    _suite(7, "recursive count and HD_1 = 0", ["recursive-count"])


def test_criterion_08_two_term_kunneth():
    _suite(8, "two-term isomorphism and Kunneth", ["two-term-iso", "kunneth"])


def test_criterion_09_corollaries():
    _suite(9, "corollary implications, no falsified case", ["corollaries"])


def test_criterion_10_lemma():
    t0 = time.perf_counter()
    entries = run_verify(["lemma"])
    dt = time.perf_counter() - t0
    bad = [e for e in entries if not e.ok]
    random = [e for e in entries if e.detail.get("substantive") is not None]
    substantive = max((e.detail["substantive"] for e in random), default=0)
    ok = not bad and dt <= 120 and substantive >= 100
    _report(10, "staircase regions and the partial-isomorphism lemma", ok,
            f"{substantive} random instances, {len(entries)} entries, {dt:.1f}s")
    assert not bad, [e.case for e in bad]
    assert substantive >= 100
    assert dt <= 120


def test_criterion_11_determinism():
    cmd = [sys.executable, "-m", "spindlehom", "verify", "axioms", "splitting", "kunneth", "lemma",
           "--fixture", "T2", "--fixture", "R3", "--seed", "7", "--format", "records"]
    env = dict(os.environ, PYTHONHASHSEED="random")
    a = subprocess.run(cmd, capture_output=True, env=env)
    b = subprocess.run(cmd, capture_output=True, env=env)
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and a.stdout
    _report(11, "byte-identical verify reports", bool(ok),
            f"{len(a.stdout)} bytes, exit {a.returncode}/{b.returncode}")
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))

"""Numbered acceptance checks; each prints one PASS/FAIL line with the observed numbers."""

import subprocess
import sys
import time

import pytest

from logsmooth.verify import ACCEPTANCE, ALL_BUDGET, run_criterion

pytestmark = pytest.mark.acceptance


def report(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("number", sorted(ACCEPTANCE))
def test_criterion(number, capsys):
    r = run_criterion(number)
    report(capsys, r.line())
    assert r.passed, r.line()
    assert r.within_budget, f"{r.seconds:.1f}s over the {r.budget}s budget"


def test_criterion_12_verify_all_wall_clock(capsys):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "logsmooth.cli", "verify", "all"], capture_output=True,
                          text=True, timeout=2 * ALL_BUDGET)
    elapsed = time.perf_counter() - t0
    finished = "criterion 12" in proc.stdout
    ok = finished and elapsed <= ALL_BUDGET
    report(capsys, f"[{'PASS' if ok else 'FAIL'}] criterion 12: verify all wall clock "
                   f"({elapsed:.2f}s/{ALL_BUDGET:g}s) exit={proc.returncode}")
    assert finished, proc.stdout[-2000:] + proc.stderr[-2000:]
    assert elapsed <= ALL_BUDGET

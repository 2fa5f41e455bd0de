"""The fourteen acceptance criteria at their stated sizes.

Each test prints one ``PASS``/``FAIL`` line, then asserts.
"""

from __future__ import annotations

import subprocess
import sys
import time

import pytest

from pcabench.bracket import check_completeness
from pcabench.density import check_density, check_density_m, check_inclusion
from pcabench.kernel import Report, check_axioms
from pcabench.oracle import make_extension, succ_table
from pcabench.stdlib import check_laws
from pcabench.suites import (base_model, check_assemblies, check_commutation, check_extension,
                             check_forced_decider, check_iota, check_lift_iota, check_nontotal,
                             check_preorder_laws, check_representable_lift, check_representer,
                             check_u_step)

SEED = 42


@pytest.fixture
def verdict(capsys):
    def emit(number, title: str, report: Report, extra: str = ""):
        status = "PASS" if report.passed else "FAIL"
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {title}{extra}")
            if not report.passed:
                print("\n".join(line for line in report.lines if line.startswith("FAIL")))
        assert report.passed, str(report)
    return emit


@pytest.fixture(scope="module")
def A():
    return base_model("term")


@pytest.fixture(scope="module")
def Af(A):
    return make_extension(A, succ_table(A))


def test_01_axioms(verdict):
    start = time.monotonic()
    report = Report()
    for name in ("term", "numeric"):
        report.extend(check_axioms(base_model(name), 500, SEED, 10**5))
    again = Report()
    for name in ("term", "numeric"):
        again.extend(check_axioms(base_model(name), 500, SEED, 10**5))
    elapsed = time.monotonic() - start
    report.record("seed-reproducible", 2, SEED, None if str(again) == str(report) else "reports differ")
    report.record("runtime<30s", 1, SEED, None if elapsed / 2 < 30 else f"{elapsed / 2:.1f}s")
    verdict(1, "PCA axioms on both base models", report)


def test_02_completeness(verdict, A):
    verdict(2, "combinatory completeness", check_completeness(A, 300, SEED, 10**5))


def test_03_stdlib(verdict, A):
    verdict(3, "stdlib equations", check_laws(A, 200, SEED, 10**5, fix_samples=100))


def test_04_extension(verdict, Af):
    verdict(4, "A[f] is a PCA", check_extension(Af, 200, SEED, 10**6))


def test_05_representer(verdict, Af):
    verdict(5, "representability", check_representer(Af, 10**5, SEED))


def test_06_iota(verdict, Af):
    verdict(6, "iota_f laws", check_iota(Af, 200, SEED, 10**5))


def test_07_universal(verdict, A, Af):
    report = check_lift_iota(Af, 100, SEED, 10**5)
    report.extend(check_representable_lift(A, 100, SEED, 10**5))
    report.extend(check_u_step(Af, 50, SEED, 10**5))
    verdict(7, "universal property (a) (b) (c)", report)


def test_08_nontotal(verdict, A):
    verdict(8, "non-totality", check_nontotal(A, 100, SEED))


def test_09_commutation(verdict, A):
    verdict(9, "A[f][g] and A[g][f] commute",
            check_commutation(A, 100, SEED, 10**5, composite_fuel=10**8))


def test_10_preorder(verdict, A):
    verdict(10, "Turing preorder", check_preorder_laws(A, SEED, 10**6))


def test_11_forced_decider(verdict, A):
    verdict(11, "decidability forcing", check_forced_decider(A, 200, SEED, 10**5))


def test_12_density(verdict, A, Af):
    report = check_density_m(A, 200, SEED, 10**5)
    report.extend(check_density(Af, 200, SEED, 10**5))
    report.extend(check_inclusion(Af, 200, SEED, 10**5))
    verdict(12, "density and inclusion", report)


def test_13_assemblies(verdict, A):
    verdict(13, "assemblies", check_assemblies(A, 10**5))


def test_14_reproducible(verdict):
    outputs, times = [], []
    for _ in range(2):
        start = time.monotonic()
        run = subprocess.run([sys.executable, "-m", "pcabench.cli", "suite", "all", "--seed", "42"],
                             capture_output=True, text=True)
        times.append(time.monotonic() - start)
        outputs.append(run.stdout)
        assert run.returncode in (0, 1), run.stderr
    report = Report()
    report.record("byte-identical", 2, SEED, None if outputs[0] == outputs[1] else "outputs differ")
    report.record("runtime<5min", 2, SEED, None if max(times) < 300 else f"{max(times):.0f}s")
    report.record("suite-all-passes", 1, SEED, None if run.returncode == 0 else "a check failed")
    verdict(14, "determinism", report, f" ({max(times):.0f}s per run)")

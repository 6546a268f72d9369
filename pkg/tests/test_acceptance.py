"""Exit criteria 1-10, each at its stated tolerance.

Every test prints a PASS/FAIL line; the lines are also collected into an
"acceptance criteria" section at the end of the pytest run.
"""

import subprocess
import sys

import pytest

from capbounds import acceptance
from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance


def _report(result):
    line = result.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line


def test_criterion_01_capacities():
    _report(acceptance.check_capacities())


def test_criterion_02_rate_loss_scaling():
    _report(acceptance.check_rate_loss())


def test_criterion_03_zero_boundaries():
    _report(acceptance.check_zero_boundaries())


def test_criterion_04_relative_entropy_oracle():
    _report(acceptance.check_relative_entropy_oracle())


def test_criterion_05_simulation_algebra():
    _report(acceptance.check_simulation_algebra())


def test_criterion_06_convergence_topology():
    _report(acceptance.check_convergence())


def test_criterion_07_corrected_strong_converse():
    _report(acceptance.check_corrected_strong_converse())


def test_criterion_08_qkd_thresholds():
    _report(acceptance.check_qkd_thresholds())


def test_criterion_09_finite_n_composer():
    _report(acceptance.check_finite_n())


def test_criterion_10_selftest_and_determinism():
    cli = [sys.executable, "-m", "capbounds.cli"]
    selftest = subprocess.run(cli + ["selftest"], capture_output=True, text=True)
    argv = cli + ["qkd-thresholds", "--db", "0:30:61"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    same = first == second
    ok = selftest.returncode == 0 and same
    summary = selftest.stdout.strip().splitlines()[-1] if selftest.stdout.strip() else "no output"
    _report(acceptance.CheckResult(10, "selftest and determinism", ok,
                                   f"selftest exit {selftest.returncode} ({summary}); identical CSV bytes {same}"))

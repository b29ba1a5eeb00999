"""Acceptance gate: one test per published criterion, each printing its
measured-vs-expected line.

Known failure: criterion 12 demands a pair yield strictly above 4e-6 for
every r >= 0.004, but the exact closed form at the left edge is
tanh(r)^2 / (4 cosh r) < r^2 / 4 = 4e-6, short of the bound by about two
parts in 1e5.  The bound is first met near r = 0.0040000373.  The test
asserts the stated bound faithfully instead of widening it, so it fails
by design; every other criterion passes.
"""
from sqherald import verification

CFG = verification.VerifyConfig()


def _check(criterion) -> None:
    res = criterion(CFG)
    status = "PASS" if res.passed else "FAIL"
    print(f"{status} [{res.index:2d}] {res.label}: {res.detail}")
    assert res.passed, f"criterion {res.index} ({res.label}): {res.detail}"


def test_criterion_01_branch_weights():
    _check(verification.criterion_1)


def test_criterion_02_herald_row_probabilities():
    _check(verification.criterion_2)


def test_criterion_03_single_photon_conditionals():
    _check(verification.criterion_3)


def test_criterion_04_pair_yield_maximization():
    _check(verification.criterion_4)


def test_criterion_05_benchmark_maximization():
    _check(verification.criterion_5)


def test_criterion_06_benchmark_click_probability():
    _check(verification.criterion_6)


def test_criterion_07_decay_rate_fits():
    _check(verification.criterion_7)


def test_criterion_08_small_r_click_limits():
    _check(verification.criterion_8)


def test_criterion_09_benchmark_g2_oracles():
    _check(verification.criterion_9)


def test_criterion_10_quality_crossover():
    _check(verification.criterion_10)


def test_criterion_11_property_suites():
    _check(verification.criterion_11)


def test_criterion_12_small_r_emission_floor():
    _check(verification.criterion_12)

"""Acceptance criteria; each test prints its PASS/FAIL line to the terminal."""

import os

import pytest

from bidisc_spectra import acceptance

SEED = int(os.environ.get("SPECTRA_SEED", "0"))
CASES = acceptance.PROPERTY_CASES


@pytest.fixture
def report(request):
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(result):
        line = result.line()
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:  # pragma: no cover
            print(line)
        return result

    return emit


@pytest.mark.parametrize(
    "criterion",
    [
        acceptance.criterion_1,
        acceptance.criterion_2,
        acceptance.criterion_3,
        acceptance.criterion_4,
        acceptance.criterion_5,
        acceptance.criterion_6,
        acceptance.criterion_8,
    ],
    ids=["1-mixed-relation", "2-independent", "3-periodic", "4-rational-irrational", "5-hyperbolic", "6-strict-order", "8-invertibility"],
)
def test_criterion(criterion, report):
    r = report(criterion())
    assert r.passed, r.detail


# These two check the literal wording of criteria whose stated outcome is
# false for the true operator; see the decisions ledger.  strict=True makes
# the suite fail loudly if they ever start passing.
@pytest.mark.xfail(strict=True, reason="sigma_ap of the periodic example is the unit circle, so interior points are certified out")
def test_criterion_3_literal(report):
    r = report(acceptance.criterion_3_literal())
    assert r.passed, r.detail


@pytest.mark.xfail(strict=True, reason="Jensen gap: the true spectral radius of z1 - 0.5 under an irrational rotation is 1, not 0.5")
def test_criterion_4_literal(report):
    r = report(acceptance.criterion_4_literal())
    assert r.passed, r.detail


@pytest.mark.parametrize("suite", list(acceptance.PROPERTY_SUITES))
def test_criterion_7_property_suite(suite, report):
    (r,) = acceptance.criterion_7(SEED, CASES, suites=[suite])
    report(r)
    assert r.passed, r.detail

"""Golden-instance self check and its failure paths."""

import math

import pytest

from phasematch import verify_golden_instance
from phasematch.golden import REFERENCE_LHS


def test_passes_with_default_tolerance():
    report = verify_golden_instance()
    assert report.passed
    assert report.failures == []
    assert report.lhs == pytest.approx(REFERENCE_LHS, abs=5e-13)
    assert report.diff <= 1e-14
    assert report.quantities["m"] == 16
    assert report.quantities["m_nearest"] == 15  # rounding modes disagree here
    assert report.quantities["theta_init"] < 0.0


def test_forced_failure_with_absurd_tolerance():
    report = verify_golden_instance(tolerance=1e-300)
    assert not report.passed
    assert any("lhs_vs_rhs" in f for f in report.failures)


def test_reported_entries_match_closed_forms():
    report = verify_golden_instance()
    (q11, q12), (q21, q22) = report.quantities["q"]
    assert q11[0] == pytest.approx(-1 / 200, abs=1e-14)
    assert q11[1] == pytest.approx(-199 / 200, abs=1e-14)
    assert q12[0] == pytest.approx(math.sqrt(199) / 200, abs=1e-14)
    assert q12[1] == pytest.approx(-math.sqrt(199) / 200, abs=1e-14)
    assert q22 == pytest.approx(q11, abs=1e-14)


def test_extended_precision_recomputation():
    # recompute both sides of the condition at 60 digits and confirm the
    # double-precision value is accurate to its last bits
    mpmath = pytest.importorskip("mpmath")
    mp = mpmath.mp
    with mpmath.workdps(60):
        a = mpmath.mpf(2) / 400
        theta = mp.pi / 2
        beta = mpmath.asin(mpmath.sqrt(a))
        phi = 2 * mpmath.atan(mpmath.tan(theta / 2) * (1 - 2 * a))
        vartheta = mpmath.asin(mpmath.sin(theta / 2) * mpmath.sin(2 * beta))
        m = int(mpmath.floor((mp.pi / 2 - beta) / vartheta)) + 1
        theta_init = mp.pi / 2 - m * vartheta
        # u from the iteration entries: arg(Q22) - arg(Q12)
        eith = mpmath.expjpi(mpmath.mpf(1) / 2)
        s2 = mpmath.sin(beta) ** 2
        q22 = -eith + (eith - 1) * s2
        q12 = -(eith - 1) * mpmath.sin(beta) * mpmath.cos(beta)
        u = mpmath.arg(q22) - mpmath.arg(q12)
        lhs = mpmath.tan(theta / 2) * (
            mpmath.cos(2 * beta) + mpmath.tan(theta_init) * mpmath.cos(u) * mpmath.sin(2 * beta)
        )
        rhs = mpmath.tan(phi / 2) * (
            1 - mpmath.tan(theta_init) * mpmath.sin(u) * mpmath.sin(2 * beta) * mpmath.tan(theta / 2)
        )
        assert m == 16
        assert mpmath.almosteq(lhs, rhs, abs_eps=mpmath.mpf(10) ** -55)
        exact = lhs
    report = verify_golden_instance()
    assert report.lhs == pytest.approx(float(exact), abs=2e-16)
    assert str(exact)[:17] == "0.987234528786745"

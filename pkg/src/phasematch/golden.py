"""Built-in golden instance used as an end-to-end self check.

The canonical configuration is a marked weight of 2/400 with theta = pi/2.
Every derived quantity then has an independent closed form:

    beta   = arcsin(sqrt(1/200))
    phi    = 2 arctan(99/100)
    Q11    = Q22 = -1/200 - (199/200) i
    Q12    = (1/200 - i/200) sqrt(199)
    Q21    = Q12 e^{i phi}
    m      = 16   (floor-plus-one rounding)

and the two sides of the matching condition, evaluated on the prepared
start state, agree and equal 0.987234528786745 to at least twelve
significant digits at double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .geometry import PhasePair, SearchGeometry, build_search_operator
from .matching import hoyer_phi, matching_sides
from .planner import hoyer_preparation

__all__ = ["GOLDEN_MARKED_WEIGHT", "GOLDEN_THETA", "REFERENCE_LHS", "GoldenReport", "verify_golden_instance"]

GOLDEN_MARKED_WEIGHT = 2.0 / 400.0
GOLDEN_THETA = math.pi / 2
REFERENCE_LHS = 0.987234528786745  # independently computed, truncated to 15 digits
_EXPECTED_M = 16


@dataclass(frozen=True)
class GoldenReport:
    quantities: dict[str, Any]
    lhs: float
    rhs: float
    diff: float
    tolerance: float
    passed: bool
    failures: list[str] = field(default_factory=list)


def verify_golden_instance(tolerance: float = 1e-12) -> GoldenReport:
    """Rebuild every golden quantity and compare against its closed form.

    The floor-plus-one rounding defines the checked instance; the nearest
    rounding is evaluated alongside and reported for comparison (it yields
    a different m and is not part of the pass criterion).
    """
    failures: list[str] = []

    def check(name: str, got: float, want: float, tol: float) -> None:
        if abs(got - want) > tol:
            failures.append(f"{name}: got {got!r}, want {want!r} (tol {tol:g})")

    geom = SearchGeometry(beta=math.asin(math.sqrt(GOLDEN_MARKED_WEIGHT)))
    phi = hoyer_phi(GOLDEN_THETA, GOLDEN_MARKED_WEIGHT)
    phases = PhasePair(theta=GOLDEN_THETA, phi=phi)
    q = build_search_operator(geom, phases)
    prep = hoyer_preparation(geom, GOLDEN_THETA, rounding_mode="floor_plus_one")
    prep_nearest = hoyer_preparation(geom, GOLDEN_THETA, rounding_mode="nearest")
    lhs, rhs = matching_sides(geom, prep.initial_state(), phases)
    diff = abs(lhs - rhs)

    check("phi", phi, 2.0 * math.atan(99.0 / 100.0), 1e-15)
    q11_want = complex(-1.0 / 200.0, -199.0 / 200.0)
    q12_want = complex(1.0 / 200.0, -1.0 / 200.0) * math.sqrt(199.0)
    check("q11", abs(q[0, 0] - q11_want), 0.0, 1e-14)
    check("q12", abs(q[0, 1] - q12_want), 0.0, 1e-14)
    check("q21", abs(q[1, 0] - q12_want * cmath.exp(1j * phi)), 0.0, 1e-14)
    check("q22", abs(q[1, 1] - q11_want), 0.0, 1e-14)
    check("m", prep.m, _EXPECTED_M, 0.0)
    check(
        "vartheta",
        prep.vartheta,
        math.asin(math.sin(GOLDEN_THETA / 2) * math.sin(2 * geom.beta)),
        1e-15,
    )
    check("theta_init", prep.theta_init, math.pi / 2 - prep.m * prep.vartheta, 1e-15)
    # u is pinned by tan(phi/2) = -cot(u), equivalent to the entry-argument form
    check("u", math.tan(0.5 * phi), -1.0 / math.tan(prep.u), 1e-12)
    check("lhs_vs_rhs", diff, 0.0, tolerance)
    check("lhs_reference", lhs, REFERENCE_LHS, max(tolerance, 5e-13))

    quantities = {
        "beta": geom.beta,
        "vartheta": prep.vartheta,
        "m": prep.m,
        "m_nearest": prep_nearest.m,
        "theta_init": prep.theta_init,
        "u": prep.u,
        "phi": phi,
        "q": [[_c(q[0, 0]), _c(q[0, 1])], [_c(q[1, 0]), _c(q[1, 1])]],
        "reference_lhs": REFERENCE_LHS,
    }
    return GoldenReport(
        quantities=quantities,
        lhs=float(lhs),
        rhs=float(rhs),
        diff=float(diff),
        tolerance=tolerance,
        passed=not failures,
        failures=failures,
    )


def _c(z: complex | np.complexfloating) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]

"""The matching condition linking rotation phases to geometry and start state.

A search with phases (theta, phi) can reach the marked state only if the
target pole lies on the circle the Bloch vector traces, i.e. only if
(r_f - r_0) . l = 0 for the rotation axis l.  Written out, that is

    tan(t/2) [cos 2b + tan(t0) cos(d) sin 2b]
        = tan(p/2) [1 - tan(t0) sin(d) sin 2b tan(t/2)]

with t = theta, p = phi, b = beta, (t0, d) the start state.  This module
evaluates the condition, solves it for phi given theta, and provides the
named special-case conditions (equal phases, Hoyer's amplitude condition,
the one-step closing move of Brassard et al.).

Internally the condition is handled in cross-multiplied half-angle form,
so theta = pi and phi = pi are regular; tan(t0) remains, which makes
t0 = pi/2 (start state already the marked state) a degenerate input.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateInputError, NoSolutionError
from .geometry import (
    InitialState2D,
    PhasePair,
    SearchGeometry,
    TwoDimState,
    build_search_operator,
    canonical_angle,
)

__all__ = [
    "MatchResidual",
    "matching_residual",
    "matching_sides",
    "solve_phi",
    "hoyer_phi",
    "brassard_final_step",
    "extract_initial_parameters",
    "special_case_of",
]

_T0_DEGENERATE = 1e-12


@dataclass(frozen=True)
class MatchResidual:
    """Cross-multiplied residual of the matching condition.

    ``value`` is L - R in half-angle form; ``normalized`` divides by
    max(|L|, |R|, 1) for a scale-free pass/fail.
    """

    value: float
    normalized: float

    def is_zero(self, tol: float = 1e-12) -> bool:
        return abs(self.normalized) <= tol


def _check_not_marked_start(init: InitialState2D) -> None:
    if math.pi / 2 - init.theta0 < _T0_DEGENERATE:
        raise DegenerateInputError(
            "start state is already the marked state (theta0 = pi/2); "
            "the matching condition is undefined there"
        )


def _half_angle_terms(
    geom: SearchGeometry, init: InitialState2D, theta: float
) -> tuple[float, float]:
    """Numerator and denominator of tan(phi/2) in half-angle form."""
    sin2b = math.sin(2.0 * geom.beta)
    cos2b = math.cos(2.0 * geom.beta)
    t0 = math.tan(init.theta0)
    st = math.sin(0.5 * theta)
    ct = math.cos(0.5 * theta)
    num = st * (cos2b + t0 * math.cos(init.delta) * sin2b)
    den = ct - t0 * math.sin(init.delta) * sin2b * st
    return num, den


def matching_residual(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair
) -> MatchResidual:
    """L - R of the condition with both sides cross-multiplied.

    L = sin(t/2) cos(p/2) [cos 2b + tan(t0) cos(d) sin 2b]
    R = sin(p/2) [cos(t/2) - tan(t0) sin(d) sin 2b sin(t/2)]

    Zero (within tolerance) exactly when the target pole lies on the
    iteration circle.
    """
    _check_not_marked_start(init)
    num, den = _half_angle_terms(geom, init, phases.theta)
    lhs = num * math.cos(0.5 * phases.phi)
    rhs = den * math.sin(0.5 * phases.phi)
    value = lhs - rhs
    return MatchResidual(value=value, normalized=value / max(abs(lhs), abs(rhs), 1.0))


def matching_sides(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair
) -> tuple[float, float]:
    """Both sides of the condition in the raw tangent form.

    Singular at theta = pi or phi = pi; use matching_residual for a
    regular evaluation.  Provided for reporting, where the raw sides are
    the quantities of record.
    """
    _check_not_marked_start(init)
    sin2b = math.sin(2.0 * geom.beta)
    cos2b = math.cos(2.0 * geom.beta)
    t0 = math.tan(init.theta0)
    tt = math.tan(0.5 * phases.theta)
    tp = math.tan(0.5 * phases.phi)
    lhs = tt * (cos2b + t0 * math.cos(init.delta) * sin2b)
    rhs = tp * (1.0 - t0 * math.sin(init.delta) * sin2b * tt)
    return lhs, rhs


def solve_phi(geom: SearchGeometry, init: InitialState2D, theta: float) -> PhasePair:
    """Unique phi in (-pi, pi] satisfying the matching condition for theta.

    phi = 2 atan2(num, den) on the half-angle form, so theta = pi maps
    cleanly to phi = pi.  Raises NoSolutionError when numerator and
    denominator vanish together (the condition then holds for every phi
    and picks out nothing).
    """
    _check_not_marked_start(init)
    theta = canonical_angle(theta)
    num, den = _half_angle_terms(geom, init, theta)
    scale = 1.0 + abs(math.tan(init.theta0)) * math.sin(2.0 * geom.beta)
    if max(abs(num), abs(den)) <= 1e-15 * scale:
        raise NoSolutionError(
            "matching condition is satisfied identically; phi is undetermined"
        )
    return PhasePair(theta=theta, phi=2.0 * math.atan2(num, den))


def hoyer_phi(theta: float, a: float) -> float:
    """Hoyer's amplitude-amplification phase: tan(phi/2) = tan(theta/2)(1-2a).

    a is the marked weight sin(beta)^2.  Evaluated in half-angle form so
    theta = pi gives phi = pi (the tangent limit) instead of overflowing.
    """
    if not 0.0 < a < 1.0:
        raise ValueError(f"marked weight a must lie in (0, 1), got {a!r}")
    theta = canonical_angle(theta)
    return canonical_angle(
        2.0 * math.atan2(math.sin(0.5 * theta) * (1.0 - 2.0 * a), math.cos(0.5 * theta))
    )


def brassard_final_step(geom: SearchGeometry, theta0: float) -> PhasePair:
    """Phases closing the search in one iteration from polar angle theta0.

    Splitting the closing condition into real and imaginary parts gives

        cos(phi) tan(theta0) sin 2b = -cos 2b
        sin(phi) tan(theta0) sin 2b =  cot(theta/2)

    solved here with phi in [0, pi] (hence theta in (0, pi]).  Requires
    tan(theta0) sin 2b >= |cos 2b|; outside that range no single closing
    step exists and NoSolutionError is raised.
    """
    if not 0.0 < theta0 < math.pi / 2:
        raise DegenerateInputError(
            f"theta0 must lie strictly inside (0, pi/2), got {theta0!r}"
        )
    reach = math.tan(theta0) * math.sin(2.0 * geom.beta)
    x = -math.cos(2.0 * geom.beta) / reach
    if abs(x) > 1.0 + 1e-12:
        raise NoSolutionError(
            "no single closing step exists: tan(theta0) sin(2 beta) < |cos(2 beta)|"
        )
    phi = math.acos(max(-1.0, min(1.0, x)))
    cot_half_theta = math.sin(phi) * reach
    theta = 2.0 * math.atan2(1.0, cot_half_theta)
    return PhasePair(theta=theta, phi=phi)


def extract_initial_parameters(state: TwoDimState) -> InitialState2D:
    """Canonical (theta0, delta) of a plane state, global phase removed.

    The amplitude on |1> is made real and non-negative; theta0 is its
    arcsine.  When either amplitude vanishes the relative phase is inert
    and is reported as 0.
    """
    a1 = complex(state.amp1)
    a2 = complex(state.amp2)
    theta0 = math.atan2(abs(a1), abs(a2))
    if abs(a1) <= 1e-15:
        return InitialState2D(theta0=0.0, delta=0.0)
    if abs(a2) <= 1e-15:
        return InitialState2D(theta0=math.pi / 2, delta=0.0)
    delta = canonical_angle(cmath.phase(a2) - cmath.phase(a1))
    return InitialState2D(theta0=theta0, delta=delta)


def special_case_of(
    geom: SearchGeometry,
    init: InitialState2D,
    phases: PhasePair,
    tol: float = 1e-9,
) -> str | None:
    """Name of the known special condition the configuration satisfies.

    Returns "theta-equals-phi" for the standard start state with equal
    phases, "brassard" for the real one-step closing move, "hoyer" when the
    phases obey the amplitude condition, otherwise None.
    """
    if (
        abs(init.theta0 - geom.beta) <= tol
        and abs(init.delta) <= tol
        and abs(canonical_angle(phases.phi - phases.theta)) <= tol
    ):
        return "theta-equals-phi"
    if abs(init.delta) <= tol and 0.0 < init.theta0 < math.pi / 2:
        reach = math.tan(init.theta0) * math.sin(2.0 * geom.beta)
        eq_re = math.cos(phases.phi) * reach + math.cos(2.0 * geom.beta)
        # cot(theta/2) in a pi-regular form: cos(t/2) = cot(t/2) sin(t/2)
        eq_im = math.sin(phases.phi) * reach * math.sin(
            0.5 * phases.theta
        ) - math.cos(0.5 * phases.theta)
        if abs(eq_re) <= tol and abs(eq_im) <= tol:
            return "brassard"
    hp = hoyer_phi(phases.theta, geom.marked_weight)
    if abs(canonical_angle(phases.phi - hp)) <= tol:
        return "hoyer"
    return None


def hoyer_relative_phase(geom: SearchGeometry, theta: float) -> float:
    """Phase u applied to the unmarked component in Hoyer's preparation.

    u = -(arg Q12 - arg Q22) of the iteration built with the Hoyer phi.
    It satisfies tan(phi/2) = -cot(u), which is what makes the matching
    condition hold for the prepared state regardless of its polar angle.
    """
    phases = PhasePair(theta=theta, phi=hoyer_phi(theta, geom.marked_weight))
    q = build_search_operator(geom, phases)
    return canonical_angle(-(cmath.phase(q[0, 1]) - cmath.phase(q[1, 1])))

"""Iteration planning: how far to rotate, how far one step goes, how many steps.

Planning quantities, all in the 3-D rotation picture:

- omega_tot: angle from the start vector to the target pole, measured
  around the iteration axis (right-handed, in [0, 2*pi)).
- alpha: rotation angle of a single iteration, in [0, pi].
- j_op = nearest integer to omega_tot / alpha, the measurement step with
  peak success probability.

The exact-search solver tunes theta (with phi following from the matching
condition) until omega_tot / alpha is exactly a prescribed integer J, which
makes the success probability exactly 1 at step J.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateInputError, InfeasibleIterationsError, PhasematchError
from .geometry import (
    InitialState2D,
    PhasePair,
    SearchGeometry,
    canonical_angle,
    initial_polarization,
    rotate_polarization,
    rotation_axis_angle,
    success_probability,
)
from .matching import hoyer_relative_phase, matching_residual, solve_phi

__all__ = [
    "MatchingWarning",
    "IterationPlan",
    "HoyerPrep",
    "CertaintySolution",
    "total_angle",
    "total_angle_arccos_form",
    "k_param",
    "step_angle",
    "step_angle_cosine",
    "optimal_iterations",
    "grover_probability",
    "probability_trajectory",
    "hoyer_preparation",
    "certainty_search",
]

_TARGET = np.array([0.0, 0.0, 1.0])


class MatchingWarning(UserWarning):
    """Planning proceeded although the phases do not satisfy the matching condition."""


@dataclass(frozen=True)
class IterationPlan:
    omega_tot: float
    alpha: float
    j_op: int
    p_at_jop: float
    p_at_jop_plus_1: float
    j_best: int
    p_best: float
    k_param: float | None


@dataclass(frozen=True)
class HoyerPrep:
    """Prepared start state of Hoyer's exact search.

    theta_init = pi/2 - m * vartheta may come out slightly negative in the
    floor_plus_one rounding mode (the preparation overshoots the pole by
    design); ``initial_state`` folds that into the canonical form.
    """

    theta_init: float
    m: int
    vartheta: float
    u: float

    def initial_state(self) -> InitialState2D:
        if math.sin(self.theta_init) < 0.0:
            return InitialState2D(
                theta0=-self.theta_init, delta=canonical_angle(self.u + math.pi)
            )
        return InitialState2D(theta0=self.theta_init, delta=self.u)


@dataclass(frozen=True)
class CertaintySolution:
    phases: PhasePair
    iterations: int
    residual_match: float
    residual_count: float
    root_count: int


def _rotation_or_raise(geom: SearchGeometry, phases: PhasePair):
    rot = rotation_axis_angle(geom, phases)
    if rot.is_identity:
        raise InfeasibleIterationsError(
            "iteration is the identity rotation (alpha = 0); no progress possible"
        )
    return rot


def total_angle(
    geom: SearchGeometry,
    init: InitialState2D,
    phases: PhasePair,
    warn: bool = True,
) -> float:
    """Rotation angle from the start vector to the target pole, in [0, 2*pi).

    Computed geometrically: both vectors are projected onto the plane normal
    to the iteration axis and the right-handed angle between the projections
    is taken.  This is the primary definition; total_angle_arccos_form is
    the closed-form cross-check.  When the phases do not satisfy the
    matching condition the angle still measures the rotation to the target
    *direction* (and a MatchingWarning is emitted): the pole itself is then
    not on the circle.
    """
    rot = _rotation_or_raise(geom, phases)
    n = rot.axis
    r0 = initial_polarization(init)
    u = r0 - np.dot(n, r0) * n
    v = _TARGET - n[2] * n
    if np.linalg.norm(u) <= 1e-12 or np.linalg.norm(v) <= 1e-12:
        raise DegenerateInputError(
            "start or target vector is parallel to the rotation axis; "
            "the rotation angle to the target is undefined"
        )
    if warn and math.pi / 2 - init.theta0 > 1e-12:
        res = matching_residual(geom, init, phases)
        if abs(res.normalized) > 1e-9:
            warnings.warn(
                f"phases do not satisfy the matching condition "
                f"(normalized residual {res.normalized:.3e}); the target pole "
                f"is not on the iteration circle",
                MatchingWarning,
                stacklevel=2,
            )
    omega = math.atan2(float(np.dot(n, np.cross(u, v))), float(np.dot(u, v)))
    return omega % math.tau


def k_param(geom: SearchGeometry, phases: PhasePair) -> float:
    """Auxiliary K = cot(theta/2) csc(2 beta) - cot(phi/2) cot(2 beta).

    K is the axis component along z when the axis is scaled to unit y
    component.  Singular at theta = 0 or phi = 0.
    """
    sin2b = math.sin(2.0 * geom.beta)
    cos2b = math.cos(2.0 * geom.beta)
    return (
        math.cos(0.5 * phases.theta) / math.sin(0.5 * phases.theta) / sin2b
        - math.cos(0.5 * phases.phi) / math.sin(0.5 * phases.phi) * cos2b / sin2b
    )


def total_angle_arccos_form(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair
) -> float:
    """Closed arccos form of the total rotation angle, in [0, pi].

    With K as in k_param and cot = cot(phi/2):

        num = -K sin(2 t0) (cot cos d + sin d) - cos(2 t0) csc^2(phi/2)
        den = 2 K^2 + 1 + cot^2
              + 2 K (K cos(2 t0) - sin(2 t0) sin d - sin(2 t0) cos d cot)

    and omega = arccos(num / den).  The denominator enters unsquare-rooted:
    under the matching condition den equals csc^2(phi/2), the squared norm
    product of the projected vectors; taking its square root is correct only
    at phi = pi.  Valid when the matching condition holds; beyond-pi
    rotations fold onto [0, pi] (use total_angle to disambiguate).
    """
    half_phi = 0.5 * phases.phi
    if abs(math.sin(half_phi)) <= 1e-15 or abs(math.sin(0.5 * phases.theta)) <= 1e-15:
        raise DegenerateInputError(
            "closed form is singular at phi = 0 or theta = 0"
        )
    K = k_param(geom, phases)
    cot = math.cos(half_phi) / math.sin(half_phi)
    csc2 = 1.0 / math.sin(half_phi) ** 2
    two_t0 = 2.0 * init.theta0
    s2t0 = math.sin(two_t0)
    c2t0 = math.cos(two_t0)
    cd = math.cos(init.delta)
    sd = math.sin(init.delta)
    num = -K * s2t0 * (cot * cd + sd) - c2t0 * csc2
    den = 2.0 * K * K + 1.0 + cot * cot + 2.0 * K * (K * c2t0 - s2t0 * sd - s2t0 * cd * cot)
    return math.acos(max(-1.0, min(1.0, num / den)))


def step_angle(geom: SearchGeometry, phases: PhasePair) -> float:
    """Rotation angle of one iteration, in [0, pi].

    Computed from the half-angle decomposition (same path as
    rotation_axis_angle, so the two agree identically); the explicit cosine
    expression is exposed as step_angle_cosine for cross-checking.
    """
    return rotation_axis_angle(geom, phases).alpha


def step_angle_cosine(geom: SearchGeometry, phases: PhasePair) -> float:
    """cos(alpha) in closed form:

    (cos 4b + 3)/4 cos t cos p + sin^2(2b) (cos(p)/2 - sin^2(t/2))
        + cos 2b sin t sin p
    """
    t, p, b = phases.theta, phases.phi, geom.beta
    return (
        0.25 * (math.cos(4.0 * b) + 3.0) * math.cos(t) * math.cos(p)
        + math.sin(2.0 * b) ** 2 * (0.5 * math.cos(p) - math.sin(0.5 * t) ** 2)
        + math.cos(2.0 * b) * math.sin(t) * math.sin(p)
    )


def optimal_iterations(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair
) -> IterationPlan:
    """Iteration count maximizing success probability, with its neighbours.

    j_op is the nearest integer to omega_tot / alpha (half-integer ties
    round up); probabilities at j_op - 1, j_op and j_op + 1 are evaluated
    and the best (ties to the smaller count) reported alongside.  This is
    the peak within the first revolution; when alpha is comparable to a
    full turn a later, wrapped-around step can land closer to the target.
    """
    rot = _rotation_or_raise(geom, phases)
    omega = total_angle(geom, init, phases)
    ratio = omega / rot.alpha
    j_op = int(math.floor(ratio + 0.5))
    r0 = initial_polarization(init)

    def prob(j: int) -> float:
        return success_probability(rotate_polarization(r0, rot, j * rot.alpha))

    # 0 is always a candidate: past-pi targets can leave the start state
    # closer to the pole than any forward step of the first revolution
    candidates = sorted({0, max(j_op - 1, 0), j_op, j_op + 1})
    probs = {j: prob(j) for j in candidates}
    j_best = candidates[0]
    for j in candidates[1:]:
        if probs[j] > probs[j_best] + 1e-15:
            j_best = j
    try:
        k = k_param(geom, phases)
        if not math.isfinite(k):
            k = None
    except ZeroDivisionError:
        k = None
    return IterationPlan(
        omega_tot=omega,
        alpha=rot.alpha,
        j_op=j_op,
        p_at_jop=probs[j_op],
        p_at_jop_plus_1=probs[j_op + 1],
        j_best=j_best,
        p_best=probs[j_best],
        k_param=k,
    )


def grover_probability(geom: SearchGeometry, j: int) -> float:
    """Success probability sin^2((2j+1) beta) after j standard iterations.

    Closed form for the inversion phases (theta = phi = pi) started from
    the unrotated state (theta0 = beta, delta = 0).
    """
    if j < 0:
        raise ValueError("iteration count must be non-negative")
    return math.sin((2 * j + 1) * geom.beta) ** 2


def probability_trajectory(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair, j_max: int
) -> np.ndarray:
    """Success probability after 0..j_max iterations (analytic rotation path)."""
    if j_max < 0:
        raise ValueError("j_max must be non-negative")
    rot = rotation_axis_angle(geom, phases)
    r0 = initial_polarization(init)
    if rot.is_identity:
        return np.full(j_max + 1, success_probability(r0))
    n = rot.axis
    a = n[2] * float(np.dot(n, r0))
    b = r0[2] - a
    c = float(np.cross(n, r0)[2])
    angles = np.arange(j_max + 1) * rot.alpha
    z = a + b * np.cos(angles) + c * np.sin(angles)
    return np.clip(0.5 * (z + 1.0), 0.0, 1.0)


def hoyer_preparation(
    geom: SearchGeometry, theta: float, rounding_mode: str = "floor_plus_one"
) -> HoyerPrep:
    """Start-state preparation of Hoyer's exact search.

    vartheta = arcsin(|sin(theta/2) sin(2 beta)|) is the polar half-angle
    one iteration advances; m counts the steps needed from the pole, with
    two rounding conventions in circulation:

    - "floor_plus_one": m = floor((pi/2 - beta)/vartheta) + 1
    - "nearest":        m = nearest integer (half-integer ties round up)

    theta_init = pi/2 - m*vartheta, and u is the relative phase put on the
    unmarked component so the prepared state satisfies the matching
    condition with the Hoyer phi.
    """
    x = abs(math.sin(0.5 * theta) * math.sin(2.0 * geom.beta))
    if x <= 1e-15:
        raise DegenerateInputError(
            "preparation step angle vanishes (sin(theta/2) sin(2 beta) = 0)"
        )
    vartheta = math.asin(min(1.0, x))
    ratio = (math.pi / 2 - geom.beta) / vartheta
    if rounding_mode == "floor_plus_one":
        m = int(math.floor(ratio)) + 1
    elif rounding_mode == "nearest":
        m = int(math.floor(ratio + 0.5))
    else:
        raise ValueError(f"unknown rounding_mode {rounding_mode!r}")
    theta_init = math.pi / 2 - m * vartheta
    u = hoyer_relative_phase(geom, theta)
    return HoyerPrep(theta_init=theta_init, m=m, vartheta=vartheta, u=u)


def certainty_search(
    geom: SearchGeometry, init: InitialState2D, iterations: int, grid_points: int = 256
) -> CertaintySolution:
    """Phases reaching the marked state with certainty at a given step count.

    Solves f(theta) = omega_tot/alpha - J = 0 over theta in (0, pi] with
    phi eliminated through the matching condition: the candidate interval
    is bracketed on a grid and each bracket refined to 1e-12.  Of multiple
    roots the one closest to the full-inversion baseline theta = pi is
    returned, with the total root count reported.  The solution is replayed
    through the rotation picture and must reach probability 1 at exactly J.
    """
    if iterations < 1:
        raise InfeasibleIterationsError("iteration count must be at least 1")
    r0 = initial_polarization(init)

    def f(theta: float) -> float:
        phases = solve_phi(geom, init, theta)
        rot = _rotation_or_raise(geom, phases)
        return total_angle(geom, init, phases, warn=False) / rot.alpha - iterations

    thetas = np.linspace(math.pi / grid_points, math.pi, grid_points)
    values = np.full(grid_points, np.nan)
    for i, th in enumerate(thetas):
        try:
            values[i] = f(th)
        except PhasematchError:
            continue

    roots: list[float] = []
    for i in range(grid_points):
        if np.isnan(values[i]):
            continue
        if abs(values[i]) < 1e-12:
            roots.append(float(thetas[i]))
            continue
        j = i + 1
        if j < grid_points and not np.isnan(values[j]) and values[i] * values[j] < 0.0:
            roots.append(float(brentq(f, thetas[i], thetas[j], xtol=1e-14, rtol=1e-15)))
    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    if not deduped:
        raise InfeasibleIterationsError(
            f"no phases realize exactly {iterations} iterations for this "
            f"geometry and start state (count below the feasible minimum)"
        )

    theta_star = min(deduped, key=lambda r: abs(r - math.pi))
    phases = solve_phi(geom, init, theta_star)
    rot = _rotation_or_raise(geom, phases)
    omega = total_angle(geom, init, phases, warn=False)
    residual_count = omega / rot.alpha - iterations
    final = rotate_polarization(r0, rot, iterations * rot.alpha)
    if success_probability(final) < 1.0 - 1e-10:
        raise InfeasibleIterationsError(
            f"root at theta = {theta_star!r} does not replay to certainty "
            f"(p = {success_probability(final)!r})"
        )
    return CertaintySolution(
        phases=phases,
        iterations=iterations,
        residual_match=matching_residual(geom, init, phases).value,
        residual_count=residual_count,
        root_count=len(deduped),
    )

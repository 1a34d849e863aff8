"""Phase-mismatch tolerance: how far phi may drift before the peak collapses.

For the standard configuration (uniform start, one marked item out of N,
matched phases) the peak success probability stays near 1 until the marked
phase is detuned by an amount that shrinks like 1/sqrt(N).  This module
measures the half-width at which the peak drops to 0.5 and fits the
log-log slope across a range of N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import (
    InitialState2D,
    PhasePair,
    SearchGeometry,
    initial_polarization,
    rotation_axis_angle,
)

__all__ = ["ScanResult", "peak_probability", "mismatch_half_width", "tolerance_scan"]


@dataclass(frozen=True)
class ScanResult:
    ns: list[int]
    half_widths: list[float]
    slope: float


def peak_probability(
    geom: SearchGeometry, init: InitialState2D, phases: PhasePair
) -> float:
    """Highest success probability on the iteration circle (continuous in omega).

    The z coordinate along the circle is A + B cos w + C sin w, so the peak
    is (1 + A + sqrt(B^2 + C^2)) / 2.  Upper bound for the discrete
    trajectory; the discrete peak approaches it whenever the step angle is
    incommensurate with the circle.
    """
    rot = rotation_axis_angle(geom, phases)
    r0 = initial_polarization(init)
    if rot.is_identity:
        return float(min(1.0, max(0.0, 0.5 * (r0[2] + 1.0))))
    n = rot.axis
    a = n[2] * float(np.dot(n, r0))
    b = r0[2] - a
    c = float(np.cross(n, r0)[2])
    return float(min(1.0, max(0.0, 0.5 * (1.0 + a + math.hypot(b, c)))))


def mismatch_half_width(n: int, theta: float, threshold: float = 0.5) -> float:
    """Detuning of phi at which the peak drops to the threshold.

    Configuration: beta = arcsin(1/sqrt(n)), start state (theta0 = beta,
    delta = 0), phi matched to theta.  Both detuning directions are probed
    and the faster-collapsing one defines the half-width.
    """
    geom = SearchGeometry(beta=math.asin(1.0 / math.sqrt(n)))
    init = InitialState2D(theta0=geom.beta, delta=0.0)

    def drop(delta_phi: float) -> float:
        worse = min(
            peak_probability(geom, init, PhasePair(theta=theta, phi=theta + delta_phi)),
            peak_probability(geom, init, PhasePair(theta=theta, phi=theta - delta_phi)),
        )
        return worse - threshold

    hi = 1e-6
    while drop(hi) > 0.0:
        hi *= 2.0
        if hi > math.pi:
            raise ValueError(f"peak never drops to {threshold} within a detuning of pi")
    return float(brentq(drop, hi / 2.0 if hi > 1e-6 else 0.0, hi, xtol=1e-14))


def tolerance_scan(n_list: list[int], theta: float) -> ScanResult:
    """Half-widths over a list of N with the fitted log-log slope."""
    ns = sorted(int(n) for n in n_list)
    if len(ns) < 2:
        raise ValueError("need at least two dimensions to fit a slope")
    widths = [mismatch_half_width(n, theta) for n in ns]
    slope = float(np.polyfit(np.log(ns), np.log(widths), 1)[0])
    return ScanResult(ns=ns, half_widths=widths, slope=slope)

"""Two-level representation of one search iteration.

The search operator acts on the invariant plane spanned by the normalized
marked component |1> and unmarked component |2> of the prepared state.  In
that basis one iteration is a 2x2 unitary Q(beta, theta, phi); its image
under conjugation with the Pauli vector is a rotation R in 3 dimensions.

Conventions used throughout:

- A plane state (a'+bi)|1> + (c+di)|2> has Bloch ("polarization") vector
  (2(a'c+bd), 2(-bc+a'd), a'^2+b^2-c^2-d^2); the marked state sits at the
  north pole (0,0,1) and the success probability is (z+1)/2.
- R_ij = Re Tr(sigma_i Q sigma_j Q†) / 2, which makes
  polarization(Q psi) = R @ polarization(psi) an identity and R blind to
  any global phase of Q.
- Rotations are axis-angle with alpha in [0, pi]; the axis orientation
  absorbs the sign (right-hand rule).  All angles are radians, canonical
  range (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tolerances import DEFAULT, Tolerances

__all__ = [
    "canonical_angle",
    "PhasePair",
    "SearchGeometry",
    "InitialState2D",
    "TwoDimState",
    "So3Rotation",
    "build_search_operator",
    "su2_to_so3",
    "su2_axis_angle",
    "rotation_axis_angle",
    "polarization_of",
    "initial_polarization",
    "success_probability",
    "rotate_polarization",
]

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def canonical_angle(x: float) -> float:
    """Reduce an angle to the canonical range (-pi, pi]."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    y = math.remainder(x, math.tau)
    if y <= -math.pi:
        y += math.tau
    return y


@dataclass(frozen=True)
class PhasePair:
    """Rotation angles of one iteration: theta on |0>, phi on the marked states."""

    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))
        object.__setattr__(self, "phi", canonical_angle(self.phi))


@dataclass(frozen=True)
class SearchGeometry:
    """Half-angle beta of the prepared state, sin(beta)^2 = marked weight."""

    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta < math.pi / 2):
            raise ValueError(f"beta must lie in (0, pi/2), got {self.beta!r}")

    @property
    def marked_weight(self) -> float:
        return math.sin(self.beta) ** 2


@dataclass(frozen=True)
class InitialState2D:
    """Plane state sin(theta0)|1> + cos(theta0) e^{i delta}|2>.

    The |1> coefficient is real and non-negative by convention (global phase
    removed), so theta0 is restricted to [0, pi/2].
    """

    theta0: float
    delta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta0 <= math.pi / 2):
            raise ValueError(f"theta0 must lie in [0, pi/2], got {self.theta0!r}")
        object.__setattr__(self, "delta", canonical_angle(self.delta))

    def amplitudes(self) -> tuple[float, complex]:
        return math.sin(self.theta0), math.cos(self.theta0) * np.exp(1j * self.delta)


@dataclass(frozen=True)
class TwoDimState:
    """Amplitudes on (|1>, |2>); must be normalized."""

    amp1: complex
    amp2: complex

    def __post_init__(self):
        norm2 = abs(self.amp1) ** 2 + abs(self.amp2) ** 2
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |amp|^2 = {norm2!r}")


@dataclass(frozen=True)
class So3Rotation:
    """Unit axis and angle alpha in [0, pi] of one iteration's 3-D rotation.

    ``is_identity`` marks the degenerate alpha = 0 case, where the axis is
    not determined by the operator (a +z placeholder is stored).
    """

    axis: np.ndarray
    alpha: float
    is_identity: bool = field(default=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        norm = np.linalg.norm(axis)
        if not self.is_identity and abs(norm - 1.0) > 1e-12:
            raise ValueError("rotation axis must be a unit vector")
        object.__setattr__(self, "axis", axis)


def build_search_operator(geom: SearchGeometry, phases: PhasePair) -> np.ndarray:
    """2x2 matrix of one iteration on the (|1>, |2>) basis.

    Entries, with s = sin(beta), c = cos(beta):

        Q11 = -e^{i phi} (1 + (e^{i theta}-1) s^2)
        Q12 = -(e^{i theta}-1) s c
        Q21 = -e^{i phi} (e^{i theta}-1) s c
        Q22 = -e^{i theta} + (e^{i theta}-1) s^2

    The matrix includes the overall minus sign of the iteration, so repeated
    left-multiplication reproduces the full operator exactly (not merely up
    to phase).
    """
    s = math.sin(geom.beta)
    c = math.cos(geom.beta)
    eith = np.exp(1j * phases.theta)
    eiph = np.exp(1j * phases.phi)
    return np.array(
        [
            [-eiph * (1.0 + (eith - 1.0) * s * s), -(eith - 1.0) * s * c],
            [-eiph * (eith - 1.0) * s * c, -eith + (eith - 1.0) * s * s],
        ]
    )


def _require_unitary(q: np.ndarray, tol: Tolerances) -> np.ndarray:
    q = np.asarray(q, dtype=complex)
    if q.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {q.shape}")
    defect = np.max(np.abs(q.conj().T @ q - np.eye(2)))
    if defect > 100 * tol.unitarity:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    return q


def su2_to_so3(q: np.ndarray, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Rotation matrix of the conjugation action of a 2x2 unitary.

    R_ij = Re Tr(sigma_i q sigma_j q†) / 2.  R is orthogonal with det +1,
    invariant under q -> e^{i chi} q, and satisfies
    polarization(q @ psi) = R @ polarization(psi).
    """
    q = _require_unitary(q, tol)
    qd = q.conj().T
    r = np.empty((3, 3))
    for i in range(3):
        qi = _SIGMA[i] @ q
        for j in range(3):
            r[i, j] = 0.5 * np.trace(qi @ _SIGMA[j] @ qd).real
    return r


def su2_axis_angle(q: np.ndarray, tol: Tolerances = DEFAULT) -> So3Rotation:
    """Axis-angle of the conjugation rotation of a 2x2 unitary.

    The unitary is first projected to determinant one; the double-cover sign
    is fixed so that alpha lands in [0, pi].  At alpha = 0 the axis is
    undetermined and the identity flag is set; at alpha = pi both axis signs
    describe the same rotation and the branch chosen by the projection is
    returned.
    """
    q = _require_unitary(q, tol)
    v = q / np.sqrt(np.linalg.det(q))
    w = 0.5 * (v[0, 0] + v[1, 1]).real
    sn = np.array(
        [
            0.5 * (1j * (v[0, 1] + v[1, 0])).real,
            0.5 * (v[1, 0] - v[0, 1]).real,
            0.5 * (-1j * (v[1, 1] - v[0, 0])).real,
        ]
    )
    if w < 0.0:
        w, sn = -w, -sn
    s = np.linalg.norm(sn)
    if s <= 1e-15:
        return So3Rotation(axis=np.array([0.0, 0.0, 1.0]), alpha=0.0, is_identity=True)
    return So3Rotation(axis=sn / s, alpha=2.0 * math.atan2(s, w))


def rotation_axis_angle(geom: SearchGeometry, phases: PhasePair) -> So3Rotation:
    """Axis and angle of one iteration, in closed form.

    Uses the half-angle parameterization of the iteration's determinant-one
    representative: with t = theta/2, p = phi/2, b = beta,

        w      = 2 sin t sin p sin(b)^2 - cos(t - p)
        s*axis = ( sin t cos p sin 2b,
                   sin t sin p sin 2b,
                   cos t sin p - sin t cos p cos 2b )

    which is free of the cot/csc singularities of the raw axis expression
    (theta or phi equal to 0 or pi, beta = pi/4 are all regular).  The
    branch is canonicalized to alpha in [0, pi] with the axis absorbing the
    sign, so the returned axis may be the negative of the unnormalized
    direction above.
    """
    t = 0.5 * phases.theta
    p = 0.5 * phases.phi
    sin2b = math.sin(2.0 * geom.beta)
    cos2b = math.cos(2.0 * geom.beta)
    w = 2.0 * math.sin(t) * math.sin(p) * math.sin(geom.beta) ** 2 - math.cos(t - p)
    sn = np.array(
        [
            math.sin(t) * math.cos(p) * sin2b,
            math.sin(t) * math.sin(p) * sin2b,
            math.cos(t) * math.sin(p) - math.sin(t) * math.cos(p) * cos2b,
        ]
    )
    if w < 0.0:
        w, sn = -w, -sn
    s = np.linalg.norm(sn)
    if s <= 1e-15:
        return So3Rotation(axis=np.array([0.0, 0.0, 1.0]), alpha=0.0, is_identity=True)
    return So3Rotation(axis=sn / s, alpha=2.0 * math.atan2(s, w))


def polarization_of(state: TwoDimState) -> np.ndarray:
    """Bloch vector (x, y, z) of a normalized plane state."""
    a1 = complex(state.amp1)
    a2 = complex(state.amp2)
    cross = a1.conjugate() * a2
    return np.array(
        [2.0 * cross.real, 2.0 * cross.imag, abs(a1) ** 2 - abs(a2) ** 2]
    )


def initial_polarization(init: InitialState2D) -> np.ndarray:
    """Bloch vector of sin(theta0)|1> + cos(theta0) e^{i delta}|2>."""
    two_t0 = 2.0 * init.theta0
    return np.array(
        [
            math.sin(two_t0) * math.cos(init.delta),
            math.sin(two_t0) * math.sin(init.delta),
            -math.cos(two_t0),
        ]
    )


def success_probability(r: np.ndarray) -> float:
    """Probability of measuring the marked state, (z+1)/2, clipped to [0, 1]."""
    return float(min(1.0, max(0.0, 0.5 * (r[2] + 1.0))))


def rotate_polarization(r0: np.ndarray, rot: So3Rotation, omega: float) -> np.ndarray:
    """Rotate a Bloch vector by omega about the rotation's axis.

    r(omega) = r0 cos w + n (n.r0)(1 - cos w) + (n x r0) sin w.  With
    omega = j * rot.alpha this reproduces j applications of the iteration.
    """
    r0 = np.asarray(r0, dtype=float)
    if rot.is_identity:
        return r0.copy()
    n = rot.axis
    cw = math.cos(omega)
    sw = math.sin(omega)
    return r0 * cw + n * np.dot(n, r0) * (1.0 - cw) + np.cross(n, r0) * sw

"""Brute-force state-vector reference for the search iteration.

One iteration on an N-dimensional state is Q = -U I_g U^{-1} I_m: I_m
multiplies every marked amplitude by e^{i phi}, and U I_g U^{-1} is the
rank-one update 1 + (e^{i theta}-1)|eta><eta| with eta the gamma column of
U.  A full iteration therefore costs O(N) once that column is known; the
unitary is never inverted, U^{-1} is always the conjugate transpose.

The plane basis used for cross-checks against the 2x2 picture is
|1> = P_marked eta / sin(beta) and |2> = P_unmarked eta / cos(beta) with
sin(beta)^2 the marked weight of eta; these are orthonormal because the
two projectors have disjoint support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateInputError
from .geometry import InitialState2D, PhasePair, SearchGeometry, TwoDimState

__all__ = [
    "DENSE_GUARD",
    "UnitarySpec",
    "MarkedSet",
    "EngineConfig",
    "PlaneProjection",
    "SimulationResult",
    "fwht",
    "build_unitary",
    "unitary_column",
    "uniform_start_unitary",
    "marked_weight_unitary",
    "beta_of",
    "initial_state",
    "apply_iteration",
    "marked_probability",
    "project_to_2d",
    "simulate",
]

DENSE_GUARD = 4096          # largest dimension for materialized matrices
HADAMARD_GUARD = 1 << 20    # column-wise Hadamard-Walsh path

_KINDS = ("hadamard_walsh", "seeded_random", "explicit")


@dataclass(frozen=True)
class UnitarySpec:
    """How to obtain the unitary: named family or explicit matrix.

    - hadamard_walsh: the n-qubit tensor power of the 2x2 Hadamard,
      entries +-1/sqrt(N); requires N to be a power of two.
    - seeded_random: deterministic Haar-like unitary from a seed.  Recipe:
      A = G1 + i G2 with G1, G2 standard-normal draws from
      numpy.random.default_rng(seed) (G1 drawn first, row-major), then
      QR-decompose A and scale column k of Q by r_kk/|r_kk|.
    - explicit: a caller-supplied N x N matrix, checked for unitarity.
    """

    kind: str
    n: int
    seed: int | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown unitary kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("dimension must be at least 2")
        if self.kind == "hadamard_walsh":
            if self.n & (self.n - 1):
                raise ValueError("hadamard_walsh requires a power-of-two dimension")
            if self.n > HADAMARD_GUARD:
                raise ValueError(f"dimension above guard {HADAMARD_GUARD}")
        else:
            if self.n > DENSE_GUARD:
                raise ValueError(f"dense unitaries are guarded to N <= {DENSE_GUARD}")
        if self.kind == "seeded_random" and self.seed is None:
            raise ValueError("seeded_random requires a seed")
        if self.kind == "explicit":
            if self.matrix is None:
                raise ValueError("explicit kind requires a matrix")
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (self.n, self.n):
                raise ValueError(f"matrix shape {m.shape} does not match n={self.n}")
            defect = np.max(np.abs(m.conj().T @ m - np.eye(self.n)))
            if defect > 1e-10:
                raise ValueError(f"explicit matrix is not unitary (defect {defect:.3e})")
            object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class MarkedSet:
    indices: frozenset[int]

    def __post_init__(self):
        idx = frozenset(int(i) for i in self.indices)
        if not idx:
            raise ValueError("marked set must not be empty")
        if min(idx) < 0:
            raise ValueError("marked indices must be non-negative")
        object.__setattr__(self, "indices", idx)

    def as_array(self) -> np.ndarray:
        return np.fromiter(sorted(self.indices), dtype=np.intp)


@dataclass(frozen=True)
class EngineConfig:
    unitary: UnitarySpec
    marked: MarkedSet
    phases: PhasePair
    gamma_index: int = 0

    def __post_init__(self):
        n = self.unitary.n
        if not 0 <= self.gamma_index < n:
            raise ValueError(f"gamma_index {self.gamma_index} outside [0, {n})")
        if max(self.marked.indices) >= n:
            raise ValueError("marked index outside the state space")


@dataclass(frozen=True)
class PlaneProjection:
    """Components along |1> and |2> plus the norm left outside the plane."""

    amp1: complex
    amp2: complex
    leakage: float

    def state(self) -> TwoDimState:
        return TwoDimState(amp1=self.amp1, amp2=self.amp2)


@dataclass(frozen=True)
class SimulationResult:
    probabilities: np.ndarray   # marked probability after 0..j iterations
    leakages: np.ndarray        # plane leakage after 0..j iterations
    final_state: np.ndarray


def fwht(vec: np.ndarray) -> np.ndarray:
    """Orthonormal fast Walsh-Hadamard transform (self-inverse)."""
    out = np.array(vec, dtype=complex)
    n = out.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        out = out.reshape(-1, 2, h)
        top = out[:, 0, :] + out[:, 1, :]
        bot = out[:, 0, :] - out[:, 1, :]
        out = np.stack([top, bot], axis=1).reshape(-1)
        h *= 2
    return out / math.sqrt(n)


def _parity_of_and(n: int, j: int) -> np.ndarray:
    x = np.arange(n, dtype=np.uint64) & np.uint64(j)
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    return (x & np.uint64(1)).astype(np.int64)


@lru_cache(maxsize=32)
def _seeded_unitary(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    u = q * (d / np.abs(d))
    u.setflags(write=False)
    return u


def build_unitary(spec: UnitarySpec) -> np.ndarray:
    """Materialize the full N x N matrix (guarded to N <= 4096)."""
    if spec.n > DENSE_GUARD:
        raise ValueError(f"materializing guarded to N <= {DENSE_GUARD}")
    if spec.kind == "explicit":
        return np.array(spec.matrix)
    if spec.kind == "seeded_random":
        return np.array(_seeded_unitary(spec.n, spec.seed))
    cols = [unitary_column(spec, j) for j in range(spec.n)]
    return np.stack(cols, axis=1)


def unitary_column(spec: UnitarySpec, j: int) -> np.ndarray:
    """Column j of the unitary without materializing the whole matrix."""
    if not 0 <= j < spec.n:
        raise ValueError(f"column {j} outside [0, {spec.n})")
    if spec.kind == "hadamard_walsh":
        signs = 1.0 - 2.0 * _parity_of_and(spec.n, j)
        return signs.astype(complex) / math.sqrt(spec.n)
    if spec.kind == "seeded_random":
        return np.array(_seeded_unitary(spec.n, spec.seed)[:, j])
    return np.array(spec.matrix[:, j])


def _reflection_to(target: np.ndarray) -> np.ndarray:
    """Real orthogonal reflection mapping e_0 to the (real, unit) target."""
    n = target.shape[0]
    w = np.zeros(n)
    w[0] = 1.0
    w -= target
    norm = np.linalg.norm(w)
    if norm < 1e-14:
        return np.eye(n)
    w /= norm
    return np.eye(n) - 2.0 * np.outer(w, w)


def uniform_start_unitary(n: int) -> UnitarySpec:
    """Explicit real unitary whose 0 column is the uniform superposition.

    Works for any dimension, power of two or not; built as a Householder
    reflection exchanging e_0 with the uniform vector.
    """
    return UnitarySpec(
        kind="explicit", n=n, matrix=_reflection_to(np.full(n, 1.0 / math.sqrt(n)))
    )


def marked_weight_unitary(n: int, marked: MarkedSet, beta: float) -> UnitarySpec:
    """Explicit unitary whose 0 column carries marked weight sin(beta)^2.

    The weight is spread uniformly over the marked indices and the
    remainder uniformly over the rest, so beta_of recovers beta exactly.
    """
    idx = marked.as_array()
    if idx.max() >= n:
        raise ValueError("marked index outside the state space")
    rest = n - idx.size
    if rest == 0:
        raise DegenerateInputError("every basis state is marked")
    v = np.full(n, math.cos(beta) / math.sqrt(rest))
    v[idx] = math.sin(beta) / math.sqrt(idx.size)
    return UnitarySpec(kind="explicit", n=n, matrix=_reflection_to(v))


def beta_of(spec: UnitarySpec, marked: MarkedSet, gamma_index: int = 0) -> SearchGeometry:
    """Geometry from the marked weight of the gamma column of the unitary."""
    eta = unitary_column(spec, gamma_index)
    weight = float(np.sum(np.abs(eta[marked.as_array()]) ** 2))
    if weight <= 1e-14 or weight >= 1.0 - 1e-14:
        raise DegenerateInputError(
            f"marked weight {weight!r} leaves nothing to search (beta = 0 or pi/2)"
        )
    return SearchGeometry(beta=math.asin(math.sqrt(weight)))


def _plane_basis(
    spec: UnitarySpec, marked: MarkedSet, gamma_index: int
) -> tuple[np.ndarray, np.ndarray]:
    eta = unitary_column(spec, gamma_index)
    geom = beta_of(spec, marked, gamma_index)
    idx = marked.as_array()
    one = np.zeros_like(eta)
    one[idx] = eta[idx]
    two = eta - one
    return one / math.sin(geom.beta), two / math.cos(geom.beta)


def initial_state(
    spec: UnitarySpec,
    marked: MarkedSet,
    init2d: InitialState2D | None = None,
    gamma_index: int = 0,
) -> np.ndarray:
    """Start vector: the gamma column of U, or a plane state built on it."""
    if init2d is None:
        return unitary_column(spec, gamma_index)
    one, two = _plane_basis(spec, marked, gamma_index)
    a1, a2 = init2d.amplitudes()
    return a1 * one + a2 * two


def apply_iteration(state: np.ndarray, cfg: EngineConfig) -> np.ndarray:
    """One application of -U I_g U^{-1} I_m to the state."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (cfg.unitary.n,):
        raise ValueError(
            f"state has shape {state.shape}, engine dimension is {cfg.unitary.n}"
        )
    out = state.copy()
    out[cfg.marked.as_array()] *= np.exp(1j * cfg.phases.phi)
    eta = unitary_column(cfg.unitary, cfg.gamma_index)
    out += (np.exp(1j * cfg.phases.theta) - 1.0) * eta * np.vdot(eta, out)
    np.negative(out, out=out)
    return out


def marked_probability(state: np.ndarray, marked: MarkedSet) -> float:
    return float(np.sum(np.abs(np.asarray(state)[marked.as_array()]) ** 2))


def project_to_2d(
    state: np.ndarray,
    spec: UnitarySpec,
    marked: MarkedSet,
    gamma_index: int = 0,
) -> PlaneProjection:
    """Components along the invariant plane and the residual norm outside it."""
    one, two = _plane_basis(spec, marked, gamma_index)
    state = np.asarray(state, dtype=complex)
    amp1 = complex(np.vdot(one, state))
    amp2 = complex(np.vdot(two, state))
    # norm of the explicit residual vector; the Pythagorean shortcut
    # sqrt(|psi|^2 - |a1|^2 - |a2|^2) cancels to a ~1e-8 noise floor
    residual = state - amp1 * one - amp2 * two
    return PlaneProjection(
        amp1=amp1, amp2=amp2, leakage=float(np.linalg.norm(residual))
    )


def state_to_jsonable(state: np.ndarray) -> list[list[float]]:
    """Amplitudes as [re, im] pairs, the interchange layout used by the CLI."""
    state = np.asarray(state, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in state]


def state_from_jsonable(pairs: list[list[float]]) -> np.ndarray:
    state = np.array([complex(re, im) for re, im in pairs])
    norm2 = float(np.vdot(state, state).real)
    if abs(norm2 - 1.0) > 1e-12:
        raise ValueError(f"state not normalized: |psi|^2 = {norm2!r}")
    return state


def simulate(
    cfg: EngineConfig,
    iterations: int,
    init2d: InitialState2D | None = None,
) -> SimulationResult:
    """Run the engine, recording marked probability and leakage per step."""
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    psi = initial_state(cfg.unitary, cfg.marked, init2d, cfg.gamma_index)
    probs = np.empty(iterations + 1)
    leaks = np.empty(iterations + 1)
    probs[0] = marked_probability(psi, cfg.marked)
    leaks[0] = project_to_2d(psi, cfg.unitary, cfg.marked, cfg.gamma_index).leakage
    for j in range(1, iterations + 1):
        psi = apply_iteration(psi, cfg)
        probs[j] = marked_probability(psi, cfg.marked)
        leaks[j] = project_to_2d(psi, cfg.unitary, cfg.marked, cfg.gamma_index).leakage
    return SimulationResult(probabilities=probs, leakages=leaks, final_state=psi)

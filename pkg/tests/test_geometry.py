"""Core geometry: operator entries, SO(3) image, axis-angle, rotations."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from phasematch import (
    InitialState2D,
    PhasePair,
    SearchGeometry,
    So3Rotation,
    TwoDimState,
    build_search_operator,
    canonical_angle,
    initial_polarization,
    polarization_of,
    rotate_polarization,
    rotation_axis_angle,
    su2_axis_angle,
    su2_to_so3,
    success_probability,
)
from phasematch.planner import step_angle_cosine

GOLDEN_BETA = math.asin(math.sqrt(0.005))
GOLDEN_PHASES = PhasePair(theta=math.pi / 2, phi=2.0 * math.atan(0.99))


def random_engine(rng):
    geom = SearchGeometry(beta=rng.uniform(0.03, math.pi / 2 - 0.03))
    phases = PhasePair(theta=rng.uniform(-math.pi, math.pi), phi=rng.uniform(-math.pi, math.pi))
    return geom, phases


def random_su2(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    a, b, c, d = v
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def test_canonical_angle_range():
    assert canonical_angle(math.pi) == math.pi
    assert canonical_angle(-math.pi) == math.pi
    assert canonical_angle(3 * math.pi) == pytest.approx(math.pi)
    assert canonical_angle(0.3 + 4 * math.pi) == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(ValueError):
        canonical_angle(float("nan"))


class TestBuildSearchOperator:
    def test_golden_entries(self):
        q = build_search_operator(SearchGeometry(beta=GOLDEN_BETA), GOLDEN_PHASES)
        assert q[0, 0] == pytest.approx(complex(-1 / 200, -199 / 200), abs=1e-14)
        assert q[0, 1] == pytest.approx(complex(1 / 200, -1 / 200) * math.sqrt(199), abs=1e-14)
        assert q[1, 0] == pytest.approx(
            q[0, 1] * np.exp(2j * math.atan(0.99)), abs=1e-14
        )
        # under the amplitude phase condition the diagonal entries coincide
        assert q[1, 1] == pytest.approx(q[0, 0], abs=1e-14)

    def test_zero_phases_give_negative_identity(self):
        q = build_search_operator(SearchGeometry(beta=0.9), PhasePair(theta=0.0, phi=0.0))
        np.testing.assert_allclose(q, -np.eye(2), atol=1e-15)

    def test_one_inversion_step_reaches_marked_state(self):
        # beta = pi/6 is the one-step-exact case: Q @ (sin b, cos b) = |1>
        geom = SearchGeometry(beta=math.pi / 6)
        q = build_search_operator(geom, PhasePair(theta=math.pi, phi=math.pi))
        out = q @ np.array([math.sin(geom.beta), math.cos(geom.beta)])
        assert abs(out[0]) == pytest.approx(1.0, abs=1e-14)
        assert abs(out[1]) == pytest.approx(0.0, abs=1e-14)

    def test_unitarity_randomized(self):
        rng = np.random.default_rng(2024)
        for _ in range(300):
            geom, phases = random_engine(rng)
            q = build_search_operator(geom, phases)
            defect = np.max(np.abs(q.conj().T @ q - np.eye(2)))
            assert defect <= 1e-12


class TestSu2ToSo3:
    def test_identity(self):
        np.testing.assert_allclose(su2_to_so3(np.eye(2)), np.eye(3), atol=1e-15)

    def test_inversion_engine_is_y_axis_rotation_by_4beta(self):
        beta = math.pi / 5
        q = build_search_operator(SearchGeometry(beta=beta), PhasePair(math.pi, math.pi))
        c, s = math.cos(4 * beta), math.sin(4 * beta)
        expected = np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])
        np.testing.assert_allclose(su2_to_so3(q), expected, atol=1e-14)

    def test_homomorphism_orthogonality_det(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            q1, q2 = random_su2(rng), random_su2(rng)
            r1, r2, r12 = su2_to_so3(q1), su2_to_so3(q2), su2_to_so3(q1 @ q2)
            assert np.max(np.abs(r12 - r1 @ r2)) <= 1e-10
            assert np.max(np.abs(r1.T @ r1 - np.eye(3))) <= 1e-12
            assert np.linalg.det(r1) == pytest.approx(1.0, abs=1e-12)

    def test_phase_blindness(self):
        rng = np.random.default_rng(11)
        q = random_su2(rng)
        for chi in (0.3, -2.0, math.pi):
            np.testing.assert_allclose(
                su2_to_so3(np.exp(1j * chi) * q), su2_to_so3(q), atol=1e-13
            )

    def test_commuting_diagram(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            geom, phases = random_engine(rng)
            q = build_search_operator(geom, phases)
            psi = rng.normal(size=2) + 1j * rng.normal(size=2)
            psi /= np.linalg.norm(psi)
            state = TwoDimState(amp1=psi[0], amp2=psi[1])
            lhs = polarization_of(TwoDimState(amp1=(q @ psi)[0], amp2=(q @ psi)[1]))
            rhs = su2_to_so3(q) @ polarization_of(state)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            su2_to_so3(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestRotationAxisAngle:
    def test_inversion_engine_axis(self):
        # the conjugation-true axis for the inversion engine is -y with
        # alpha = 4 beta; the raw printed direction (+y) describes the same
        # rotation traversed backwards
        rot = rotation_axis_angle(SearchGeometry(beta=math.pi / 6), PhasePair(math.pi, math.pi))
        np.testing.assert_allclose(rot.axis, [0.0, -1.0, 0.0], atol=1e-14)
        assert rot.alpha == pytest.approx(2 * math.pi / 3, abs=1e-14)

    def test_zero_phases_flagged_identity(self):
        rot = rotation_axis_angle(SearchGeometry(beta=0.4), PhasePair(0.0, 0.0))
        assert rot.is_identity
        assert rot.alpha == 0.0

    def test_matches_su2_decomposition_on_golden_instance(self):
        geom = SearchGeometry(beta=GOLDEN_BETA)
        rot = rotation_axis_angle(geom, GOLDEN_PHASES)
        ref = su2_axis_angle(build_search_operator(geom, GOLDEN_PHASES))
        assert rot.alpha == pytest.approx(ref.alpha, abs=1e-10)
        np.testing.assert_allclose(rot.axis, ref.axis, atol=1e-10)

    def test_matches_scipy_decomposition_randomized(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            geom, phases = random_engine(rng)
            rot = rotation_axis_angle(geom, phases)
            if rot.is_identity:
                continue
            rotvec = Rotation.from_matrix(
                su2_to_so3(build_search_operator(geom, phases))
            ).as_rotvec()
            alpha_ref = np.linalg.norm(rotvec)
            assert rot.alpha == pytest.approx(alpha_ref, abs=1e-10)
            if alpha_ref > 1e-6 and alpha_ref < math.pi - 1e-6:
                np.testing.assert_allclose(rot.axis, rotvec / alpha_ref, atol=1e-9)
            elif alpha_ref >= math.pi - 1e-6:
                # at alpha = pi the axis sign is arbitrary; compare up to sign
                dot = abs(float(np.dot(rot.axis, rotvec / alpha_ref)))
                assert dot == pytest.approx(1.0, abs=1e-9)

    def test_axis_parallel_to_raw_direction(self):
        # the cot/csc form of the axis, where defined, is parallel (up to
        # the canonical-branch sign) to the returned axis
        rng = np.random.default_rng(17)
        for _ in range(100):
            geom = SearchGeometry(beta=rng.uniform(0.05, math.pi / 2 - 0.05))
            theta = rng.uniform(0.1, math.pi - 0.1)
            phi = rng.uniform(0.1, math.pi - 0.1)
            raw = np.array(
                [
                    1.0 / math.tan(phi / 2),
                    1.0,
                    -math.cos(2 * geom.beta)
                    / math.sin(2 * geom.beta)
                    / math.tan(phi / 2)
                    + math.cos(theta / 2)
                    / math.sin(theta / 2)
                    / math.sin(2 * geom.beta),
                ]
            )
            raw /= np.linalg.norm(raw)
            rot = rotation_axis_angle(geom, PhasePair(theta, phi))
            assert abs(float(np.dot(raw, rot.axis))) == pytest.approx(1.0, abs=1e-10)

    def test_cosine_matches_closed_form(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            geom, phases = random_engine(rng)
            rot = rotation_axis_angle(geom, phases)
            assert math.cos(rot.alpha) == pytest.approx(
                step_angle_cosine(geom, phases), abs=1e-12
            )

    def test_step_doubling(self):
        # one inversion iteration advances the Bloch vector by 4 beta; the
        # canonical angle folds onto [0, pi] past beta = pi/4
        for beta in np.linspace(0.02, math.pi / 2 - 0.02, 25):
            rot = rotation_axis_angle(SearchGeometry(beta=beta), PhasePair(math.pi, math.pi))
            expected = 4 * beta if beta <= math.pi / 4 else 2 * math.pi - 4 * beta
            assert rot.alpha == pytest.approx(expected, abs=1e-12)


class TestPolarization:
    def test_poles(self):
        np.testing.assert_allclose(
            polarization_of(TwoDimState(amp1=1.0, amp2=0.0)), [0, 0, 1], atol=1e-15
        )
        np.testing.assert_allclose(
            polarization_of(TwoDimState(amp1=0.0, amp2=1.0)), [0, 0, -1], atol=1e-15
        )

    def test_plane_state(self):
        beta = math.pi / 6
        r = polarization_of(TwoDimState(amp1=math.sin(beta), amp2=math.cos(beta)))
        np.testing.assert_allclose(r, [math.sqrt(3) / 2, 0.0, -0.5], atol=1e-15)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            TwoDimState(amp1=1.0, amp2=1.0)

    def test_initial_polarization_agrees(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            init = InitialState2D(
                theta0=rng.uniform(0, math.pi / 2), delta=rng.uniform(-math.pi, math.pi)
            )
            a1, a2 = init.amplitudes()
            np.testing.assert_allclose(
                initial_polarization(init),
                polarization_of(TwoDimState(amp1=a1, amp2=a2)),
                atol=1e-14,
            )


class TestSuccessProbability:
    def test_values(self):
        assert success_probability(np.array([0.0, 0.0, 1.0])) == 1.0
        assert success_probability(np.array([0.0, 0.0, -1.0])) == 0.0
        assert success_probability(np.array([math.sqrt(3) / 2, 0.0, -0.5])) == pytest.approx(
            0.25, abs=1e-15
        )


class TestRotatePolarization:
    def test_zero_angle(self):
        r0 = np.array([0.3, -0.5, math.sqrt(1 - 0.34)])
        rot = So3Rotation(axis=np.array([0.0, 1.0, 0.0]), alpha=1.0)
        np.testing.assert_allclose(rotate_polarization(r0, rot, 0.0), r0, atol=1e-15)

    def test_one_inversion_step_reaches_pole(self):
        geom = SearchGeometry(beta=math.pi / 6)
        rot = rotation_axis_angle(geom, PhasePair(math.pi, math.pi))
        r0 = np.array([math.sqrt(3) / 2, 0.0, -0.5])
        np.testing.assert_allclose(
            rotate_polarization(r0, rot, 2 * math.pi / 3), [0, 0, 1], atol=1e-14
        )

    def test_axis_is_fixed_point(self):
        rot = So3Rotation(axis=np.array([0.6, 0.0, 0.8]), alpha=0.7)
        r0 = rot.axis.copy()
        np.testing.assert_allclose(rotate_polarization(r0, rot, 2.1), r0, atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(
        omega=st.floats(-10, 10),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_norm_preserved(self, omega, seed):
        rng = np.random.default_rng(seed)
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        r0 = rng.normal(size=3)
        r0 /= np.linalg.norm(r0)
        rot = So3Rotation(axis=axis, alpha=1.0)
        out = rotate_polarization(r0, rot, omega)
        assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)

"""Generalized quantum-search iteration toolkit.

Solves the phase-matching condition for arbitrary rotation phases, unitary
and plane start state, plans iteration counts, constructs exact searches,
and cross-validates everything against a brute-force state-vector engine.
"""

from .errors import (
    DegenerateInputError,
    InfeasibleIterationsError,
    NoSolutionError,
    PhasematchError,
)
from .geometry import (
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
from .golden import GoldenReport, verify_golden_instance
from .matching import (
    MatchResidual,
    brassard_final_step,
    extract_initial_parameters,
    hoyer_phi,
    matching_residual,
    matching_sides,
    solve_phi,
    special_case_of,
)
from .oracle import (
    EngineConfig,
    MarkedSet,
    UnitarySpec,
    apply_iteration,
    beta_of,
    build_unitary,
    fwht,
    initial_state,
    marked_probability,
    marked_weight_unitary,
    project_to_2d,
    simulate,
    uniform_start_unitary,
    unitary_column,
)
from .planner import (
    CertaintySolution,
    HoyerPrep,
    IterationPlan,
    MatchingWarning,
    certainty_search,
    grover_probability,
    hoyer_preparation,
    k_param,
    optimal_iterations,
    probability_trajectory,
    step_angle,
    step_angle_cosine,
    total_angle,
    total_angle_arccos_form,
)
from .scan import ScanResult, mismatch_half_width, peak_probability, tolerance_scan
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"

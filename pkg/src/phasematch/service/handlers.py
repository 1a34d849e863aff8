"""Command implementations behind both the HTTP routes and the CLI.

Each handler validates domain constraints (pydantic has already checked
shapes), runs the computation, and packs a CommandReport.  Domain errors
propagate as package exceptions; the route layer and the CLI map them to
status codes and exit codes respectively.
"""

from __future__ import annotations

import math
import warnings

from .. import golden, matching, oracle, planner, scan
from ..errors import InfeasibleIterationsError
from ..geometry import InitialState2D, PhasePair, SearchGeometry
from ..tolerances import resolve_residual_tol
from .models import (
    CertainRequest,
    CommandReport,
    PlanRequest,
    ScanRequest,
    SimulateRequest,
    SolveRequest,
    VerifyRequest,
)

_DEG = math.pi / 180.0


def _rad(value: float, degrees: bool) -> float:
    return value * _DEG if degrees else value


def handle_solve(req: SolveRequest) -> CommandReport:
    tol = resolve_residual_tol(req.tolerance)
    geom = SearchGeometry(beta=_rad(req.beta, req.degrees))
    init = InitialState2D(theta0=_rad(req.theta0, req.degrees), delta=_rad(req.delta, req.degrees))
    pair = matching.solve_phi(geom, init, _rad(req.theta, req.degrees))
    res = matching.matching_residual(geom, init, pair)
    outputs: dict = {
        "phi": pair.phi,
        "theta": pair.theta,
        "special_case": matching.special_case_of(geom, init, pair) or "general",
    }
    # raw tangent-form sides are meaningful away from the theta/phi = pi poles
    if min(abs(math.cos(0.5 * pair.theta)), abs(math.cos(0.5 * pair.phi))) > 1e-8:
        lhs, rhs = matching.matching_sides(geom, init, pair)
        outputs["lhs"] = lhs
        outputs["rhs"] = rhs
    return CommandReport(
        command="solve",
        inputs=req.model_dump(),
        outputs=outputs,
        residuals={"raw": res.value, "normalized": res.normalized},
        passed=res.is_zero(tol),
    )


def handle_plan(req: PlanRequest) -> CommandReport:
    tol = resolve_residual_tol(req.tolerance)
    geom = SearchGeometry(beta=_rad(req.beta, req.degrees))
    init = InitialState2D(theta0=_rad(req.theta0, req.degrees), delta=_rad(req.delta, req.degrees))
    theta = _rad(req.theta, req.degrees)
    if req.phi is None:
        pair = matching.solve_phi(geom, init, theta)
    else:
        pair = PhasePair(theta=theta, phi=_rad(req.phi, req.degrees))
    res = matching.matching_residual(geom, init, pair)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", planner.MatchingWarning)
        plan = planner.optimal_iterations(geom, init, pair)
    below = planner.probability_trajectory(geom, init, pair, max(plan.j_op - 1, 0))
    outputs: dict = {
        "phi": pair.phi,
        "omega_tot": plan.omega_tot,
        "alpha": plan.alpha,
        "j_op": plan.j_op,
        "p_at_jop_minus_1": float(below[-1]),
        "p_at_jop": plan.p_at_jop,
        "p_at_jop_plus_1": plan.p_at_jop_plus_1,
        "j_best": plan.j_best,
        "p_best": plan.p_best,
        "k_param": plan.k_param,
        "matched": res.is_zero(tol),
    }
    if req.trajectory is not None:
        outputs["trajectory"] = planner.probability_trajectory(
            geom, init, pair, req.trajectory
        ).tolist()
    return CommandReport(
        command="plan",
        inputs=req.model_dump(),
        outputs=outputs,
        residuals={"raw": res.value, "normalized": res.normalized},
        passed=True,
    )


def handle_certain(req: CertainRequest) -> CommandReport:
    tol = resolve_residual_tol(req.tolerance)
    geom = SearchGeometry(beta=_rad(req.beta, req.degrees))
    init = InitialState2D(theta0=_rad(req.theta0, req.degrees), delta=_rad(req.delta, req.degrees))
    if req.iterations < 1:
        raise InfeasibleIterationsError("iteration count must be at least 1")
    sol = planner.certainty_search(geom, init, req.iterations)
    outputs: dict = {
        "theta": sol.phases.theta,
        "phi": sol.phases.phi,
        "iterations": sol.iterations,
        "root_count": sol.root_count,
    }
    passed = abs(sol.residual_match) <= max(tol, 1e-10) and abs(sol.residual_count) <= 1e-10
    if req.verify_n is not None:
        spec = oracle.marked_weight_unitary(
            req.verify_n, oracle.MarkedSet({req.verify_n - 1}), geom.beta
        )
        cfg = oracle.EngineConfig(
            unitary=spec, marked=oracle.MarkedSet({req.verify_n - 1}), phases=sol.phases
        )
        sim = oracle.simulate(cfg, req.iterations, init2d=init)
        p_final = float(sim.probabilities[-1])
        outputs["oracle_probability"] = p_final
        outputs["oracle_n"] = req.verify_n
        passed = passed and p_final >= 1.0 - 1e-10
    return CommandReport(
        command="certain",
        inputs=req.model_dump(),
        outputs=outputs,
        residuals={"match": sol.residual_match, "count": sol.residual_count},
        passed=passed,
    )


def handle_simulate(req: SimulateRequest) -> CommandReport:
    tol = resolve_residual_tol(req.tolerance)
    marked = oracle.MarkedSet(req.marked)
    if req.unitary == "hadamard":
        spec = oracle.UnitarySpec(kind="hadamard_walsh", n=req.n)
    elif req.unitary == "random":
        spec = oracle.UnitarySpec(kind="seeded_random", n=req.n, seed=req.seed)
    else:
        spec = oracle.uniform_start_unitary(req.n)
    theta = _rad(req.theta, req.degrees)
    phi = _rad(req.phi, req.degrees)
    phases = PhasePair(theta=theta, phi=phi)
    cfg = oracle.EngineConfig(
        unitary=spec, marked=marked, phases=phases, gamma_index=req.gamma_index
    )
    geom = oracle.beta_of(spec, marked, req.gamma_index)
    if req.theta0 is None:
        init = InitialState2D(theta0=geom.beta, delta=0.0)
        init2d = None
    else:
        init = InitialState2D(
            theta0=_rad(req.theta0, req.degrees), delta=_rad(req.delta, req.degrees)
        )
        init2d = init
    sim = oracle.simulate(cfg, req.iterations, init2d=init2d)
    analytic = planner.probability_trajectory(geom, init, phases, req.iterations)
    rows = [
        {
            "j": j,
            "p_oracle": float(sim.probabilities[j]),
            "p_analytic": float(analytic[j]),
            "leakage": float(sim.leakages[j]),
        }
        for j in range(req.iterations + 1)
    ]
    max_diff = float(max(abs(r["p_oracle"] - r["p_analytic"]) for r in rows))
    max_leak = float(sim.leakages.max())
    outputs = {
        "beta": geom.beta,
        "rows": rows,
        "max_abs_diff": max_diff,
        "max_leakage": max_leak,
    }
    if req.include_state:
        outputs["final_state"] = oracle.state_to_jsonable(sim.final_state)
    return CommandReport(
        command="simulate",
        inputs=req.model_dump(),
        outputs=outputs,
        residuals={"max_abs_diff": max_diff, "max_leakage": max_leak},
        passed=max_diff <= max(tol, 1e-10) and max_leak <= max(tol, 1e-10),
    )


def handle_scan(req: ScanRequest) -> CommandReport:
    result = scan.tolerance_scan(req.n_list, _rad(req.theta, req.degrees))
    rows = [
        {"n": n, "half_width": hw} for n, hw in zip(result.ns, result.half_widths)
    ]
    return CommandReport(
        command="scan-tolerance",
        inputs=req.model_dump(),
        outputs={"rows": rows, "slope": result.slope},
        passed=True,
    )


def handle_verify(req: VerifyRequest) -> CommandReport:
    report = golden.verify_golden_instance(resolve_residual_tol(req.tolerance))
    outputs = dict(report.quantities)
    outputs.update(lhs=report.lhs, rhs=report.rhs, diff=report.diff, failures=report.failures)
    return CommandReport(
        command="verify-appendix",
        inputs=req.model_dump(),
        outputs=outputs,
        residuals={"lhs_minus_rhs": report.diff},
        passed=report.passed,
    )

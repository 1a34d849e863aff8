"""Command-line client for the solver, planner, simulator and self checks.

Commands run in-process by default; with --server URL they are sent to a
running service instead and the response is rendered identically.  Output
is JSON (default) or CSV; angles are radians unless --degrees is given.

Exit codes: 0 success, 1 bad input, 2 no solution / infeasible request,
3 verification failure.
"""

from __future__ import annotations

import json
import sys
from typing import Any

import click
import pydantic

from .errors import DegenerateInputError, InfeasibleIterationsError, NoSolutionError
from .service import handlers
from .service.models import (
    CertainRequest,
    CommandReport,
    PlanRequest,
    ScanRequest,
    SimulateRequest,
    SolveRequest,
    VerifyRequest,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_NO_SOLUTION = 2
EXIT_VERIFY_FAILED = 3

_ROUTES = {
    "solve": "/solve",
    "plan": "/plan",
    "certain": "/certain",
    "simulate": "/simulate",
    "scan-tolerance": "/scan-tolerance",
    "verify-appendix": "/verify-appendix",
}


class RemoteCommandError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


_HANDLERS = {
    "solve": handlers.handle_solve,
    "plan": handlers.handle_plan,
    "certain": handlers.handle_certain,
    "simulate": handlers.handle_simulate,
    "scan-tolerance": handlers.handle_scan,
    "verify-appendix": handlers.handle_verify,
}


def _execute(ctx: click.Context, request: pydantic.BaseModel, command: str) -> CommandReport:
    server = ctx.obj.get("server")
    if server is None:
        return _HANDLERS[command](request)
    return _run_remote(server, request, command)


def _run_remote(server: str, request: pydantic.BaseModel, command: str) -> CommandReport:
    import httpx

    url = server.rstrip("/") + _ROUTES[command]
    response = httpx.post(url, json=request.model_dump(), timeout=300.0)
    if response.status_code == 200:
        return CommandReport.model_validate(response.json())
    try:
        detail = response.json()
    except ValueError:
        raise RemoteCommandError(EXIT_BAD_INPUT, f"server error {response.status_code}")
    if response.status_code in (400, 422):
        raise RemoteCommandError(EXIT_BAD_INPUT, str(detail))
    if response.status_code == 409:
        raise RemoteCommandError(EXIT_NO_SOLUTION, str(detail))
    raise RemoteCommandError(EXIT_BAD_INPUT, f"server error {response.status_code}: {detail}")


def _csv_lines(report: CommandReport) -> list[str]:
    if report.command == "simulate":
        lines = ["j,p_oracle,p_analytic,leakage"]
        lines += [
            f"{r['j']},{r['p_oracle']!r},{r['p_analytic']!r},{r['leakage']!r}"
            for r in report.outputs["rows"]
        ]
        return lines
    if report.command == "scan-tolerance":
        lines = ["n,half_width"]
        lines += [f"{r['n']},{r['half_width']!r}" for r in report.outputs["rows"]]
        lines.append(f"# slope={report.outputs['slope']!r}")
        return lines
    lines = ["key,value"]
    flat: dict[str, Any] = dict(report.outputs)
    flat.update({f"residual_{k}": v for k, v in report.residuals.items()})
    flat["pass"] = report.passed
    for key, value in flat.items():
        lines.append(f"{key},{json.dumps(value) if isinstance(value, (list, dict)) else value}")
    return lines


def _emit(report: CommandReport, fmt: str, out: str | None) -> int:
    if fmt == "csv":
        text = "\n".join(_csv_lines(report)) + "\n"
    else:
        text = json.dumps(report.model_dump(by_alias=True), indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


fmt_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True
)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="write output to a file instead of stdout")
degrees_option = click.option("--degrees", is_flag=True, help="interpret angle flags as degrees")
tol_option = click.option("--tolerance", type=float, default=None,
                          help="residual tolerance (overrides PHASEMATCH_TOL)")


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="send the command to a running service instead of computing locally")
@click.version_option()
@click.pass_context
def cli(ctx: click.Context, server: str | None):
    """Phase-matched quantum-search planning toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@cli.command()
@click.option("--beta", type=float, required=True)
@click.option("--theta0", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--theta", type=float, required=True)
@degrees_option
@tol_option
@fmt_option
@out_option
@click.pass_context
def solve(ctx, beta, theta0, delta, theta, degrees, tolerance, fmt, out):
    """Solve the matching condition for phi given theta."""
    req = SolveRequest(beta=beta, theta0=theta0, delta=delta, theta=theta,
                       degrees=degrees, tolerance=tolerance)
    return _emit(_execute(ctx, req, "solve"), fmt, out)


@cli.command()
@click.option("--beta", type=float, required=True)
@click.option("--theta0", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--theta", type=float, required=True)
@click.option("--phi", type=float, default=None,
              help="use this phi instead of solving the matching condition")
@click.option("--trajectory", type=int, default=None, metavar="J_MAX",
              help="include per-step probabilities up to J_MAX")
@degrees_option
@tol_option
@fmt_option
@out_option
@click.pass_context
def plan(ctx, beta, theta0, delta, theta, phi, trajectory, degrees, tolerance, fmt, out):
    """Total angle, step angle, optimal iteration count and probabilities."""
    req = PlanRequest(beta=beta, theta0=theta0, delta=delta, theta=theta, phi=phi,
                      trajectory=trajectory, degrees=degrees, tolerance=tolerance)
    return _emit(_execute(ctx, req, "plan"), fmt, out)


@cli.command()
@click.option("--beta", type=float, required=True)
@click.option("--theta0", type=float, required=True)
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("-J", "--iterations", type=int, required=True,
              help="prescribed iteration count J")
@click.option("--verify", "verify_n", type=int, default=None, metavar="N",
              help="replay the solution in an N-dimensional engine")
@degrees_option
@tol_option
@fmt_option
@out_option
@click.pass_context
def certain(ctx, beta, theta0, delta, iterations, verify_n, degrees, tolerance, fmt, out):
    """Phases that reach the marked state with certainty at step J."""
    req = CertainRequest(beta=beta, theta0=theta0, delta=delta, iterations=iterations,
                         verify_n=verify_n, degrees=degrees, tolerance=tolerance)
    return _emit(_execute(ctx, req, "certain"), fmt, out)


@cli.command()
@click.option("--n", type=int, required=True, help="state-space dimension")
@click.option("--marked", required=True, metavar="I,J,...",
              help="comma-separated marked basis indices")
@click.option("--theta", type=float, required=True)
@click.option("--phi", type=float, required=True)
@click.option("--iterations", type=int, required=True)
@click.option("--unitary", type=click.Choice(["hadamard", "random", "uniform"]),
              default="hadamard", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--theta0", type=float, default=None,
              help="start from a plane state instead of the unitary's 0 column")
@click.option("--delta", type=float, default=0.0, show_default=True)
@click.option("--gamma-index", type=int, default=0, show_default=True)
@click.option("--dump-state", type=click.Path(dir_okay=False), default=None,
              help="write the final state vector to a JSON file")
@degrees_option
@tol_option
@fmt_option
@out_option
@click.pass_context
def simulate(ctx, n, marked, theta, phi, iterations, unitary, seed, theta0, delta,
             gamma_index, dump_state, degrees, tolerance, fmt, out):
    """Run the state-vector engine and compare with the analytic trajectory."""
    indices = [int(tok) for tok in marked.split(",") if tok.strip() != ""]
    req = SimulateRequest(n=n, marked=indices, theta=theta, phi=phi, iterations=iterations,
                          unitary=unitary, seed=seed, theta0=theta0, delta=delta,
                          gamma_index=gamma_index, include_state=dump_state is not None,
                          degrees=degrees, tolerance=tolerance)
    report = _execute(ctx, req, "simulate")
    if dump_state is not None:
        payload = {"n": n, "amplitudes": report.outputs["final_state"]}
        with open(dump_state, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
    return _emit(report, fmt, out)


@cli.command(name="scan-tolerance")
@click.option("--n-list", required=True, metavar="N1,N2,...",
              help="comma-separated state-space dimensions")
@click.option("--theta", type=float, default=3.141592653589793, show_default=True)
@degrees_option
@fmt_option
@out_option
@click.pass_context
def scan_tolerance(ctx, n_list, theta, degrees, fmt, out):
    """Phase-mismatch half-width per dimension plus the fitted log-log slope."""
    ns = [int(tok) for tok in n_list.split(",") if tok.strip() != ""]
    req = ScanRequest(n_list=ns, theta=theta, degrees=degrees)
    return _emit(_execute(ctx, req, "scan-tolerance"), fmt, out)


@cli.command(name="verify-appendix")
@tol_option
@fmt_option
@out_option
@click.pass_context
def verify_appendix(ctx, tolerance, fmt, out):
    """Rebuild the golden reference instance and check every quantity."""
    req = VerifyRequest(tolerance=tolerance)
    return _emit(_execute(ctx, req, "verify-appendix"), fmt, out)


def main(argv: list[str] | None = None) -> None:
    try:
        rc = cli.main(args=argv, standalone_mode=False, obj={})
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_BAD_INPUT)
    except click.Abort:
        sys.exit(EXIT_BAD_INPUT)
    except pydantic.ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)
    except (DegenerateInputError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)
    except (NoSolutionError, InfeasibleIterationsError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NO_SOLUTION)
    except RemoteCommandError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    sys.exit(rc if isinstance(rc, int) else EXIT_OK)


if __name__ == "__main__":
    main()

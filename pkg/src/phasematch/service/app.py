"""FastAPI application wrapping the core package."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    DegenerateInputError,
    InfeasibleIterationsError,
    NoSolutionError,
)
from . import handlers
from .models import (
    CertainRequest,
    CommandReport,
    PlanRequest,
    ScanRequest,
    SimulateRequest,
    SolveRequest,
    VerifyRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="phasematch",
        version=__version__,
        description=(
            "Phase-matched quantum-search planning: solve the matching "
            "condition, plan iteration counts, construct exact searches, "
            "and replay everything in a state-vector engine."
        ),
    )

    def _error(status: int, kind: str, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"error": {"kind": kind, "message": str(exc)}},
        )

    @app.exception_handler(DegenerateInputError)
    async def _degenerate(request: Request, exc: DegenerateInputError):
        return _error(400, "invalid_input", exc)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return _error(400, "invalid_input", exc)

    @app.exception_handler(NoSolutionError)
    async def _no_solution(request: Request, exc: NoSolutionError):
        return _error(409, "no_solution", exc)

    @app.exception_handler(InfeasibleIterationsError)
    async def _infeasible(request: Request, exc: InfeasibleIterationsError):
        return _error(409, "infeasible", exc)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/solve", response_model=CommandReport)
    def solve(req: SolveRequest) -> CommandReport:
        return handlers.handle_solve(req)

    @app.post("/plan", response_model=CommandReport)
    def plan(req: PlanRequest) -> CommandReport:
        return handlers.handle_plan(req)

    @app.post("/certain", response_model=CommandReport)
    def certain(req: CertainRequest) -> CommandReport:
        return handlers.handle_certain(req)

    @app.post("/simulate", response_model=CommandReport)
    def simulate(req: SimulateRequest) -> CommandReport:
        return handlers.handle_simulate(req)

    @app.post("/scan-tolerance", response_model=CommandReport)
    def scan_tolerance(req: ScanRequest) -> CommandReport:
        return handlers.handle_scan(req)

    @app.post("/verify-appendix", response_model=CommandReport)
    def verify_appendix(req: VerifyRequest) -> CommandReport:
        return handlers.handle_verify(req)

    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("phasematch.service.app:app", host="127.0.0.1", port=8000)

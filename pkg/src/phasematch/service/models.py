"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class AngleInputs(BaseModel):
    """Common angle parameters; radians unless ``degrees`` is set."""

    beta: float
    theta0: float
    delta: float = 0.0
    degrees: bool = False
    tolerance: float | None = Field(default=None, description="residual tolerance override")


class SolveRequest(AngleInputs):
    theta: float


class PlanRequest(AngleInputs):
    theta: float
    phi: float | None = None
    trajectory: int | None = Field(default=None, ge=0, description="emit probabilities up to this step")


class CertainRequest(AngleInputs):
    iterations: int = Field(ge=0, description="prescribed step count J")
    verify_n: int | None = Field(default=None, ge=2, description="replay in an N-dimensional engine")


class SimulateRequest(BaseModel):
    n: int = Field(ge=2)
    marked: list[int] = Field(min_length=1)
    theta: float
    phi: float
    iterations: int = Field(ge=0)
    unitary: Literal["hadamard", "random", "uniform"] = "hadamard"
    seed: int = 0
    theta0: float | None = None
    delta: float = 0.0
    gamma_index: int = 0
    include_state: bool = Field(default=False, description="attach the final state vector")
    degrees: bool = False
    tolerance: float | None = None


class ScanRequest(BaseModel):
    n_list: list[int] = Field(min_length=2)
    theta: float
    degrees: bool = False


class VerifyRequest(BaseModel):
    tolerance: float | None = None


class CommandReport(BaseModel):
    """Uniform envelope: {command, inputs, outputs, residuals, pass}."""

    model_config = ConfigDict(populate_by_name=True)

    command: str
    inputs: dict[str, Any]
    outputs: dict[str, Any]
    residuals: dict[str, float] = Field(default_factory=dict)
    passed: bool = Field(default=True, alias="pass")


class ErrorBody(BaseModel):
    kind: Literal["invalid_input", "no_solution", "infeasible", "internal"]
    message: str


class ErrorReport(BaseModel):
    error: ErrorBody

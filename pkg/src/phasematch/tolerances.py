"""Central numeric tolerance configuration.

All comparisons in the package go through one of these constants so that a
single record controls pass/fail behaviour everywhere.  The residual
tolerance may be overridden at the CLI/service boundary via the
PHASEMATCH_TOL environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_TOL = "PHASEMATCH_TOL"


@dataclass(frozen=True)
class Tolerances:
    equality: float = 1e-10      # generic float comparisons between two routes
    unitarity: float = 1e-12     # max-norm deviation of Q†Q from identity
    residual: float = 1e-12      # matching-condition residual treated as zero


DEFAULT = Tolerances()


def resolve_residual_tol(override: float | None = None) -> float:
    """Residual tolerance with CLI override precedence: flag > env > default."""
    if override is not None:
        return float(override)
    env = os.environ.get(ENV_TOL)
    if env is not None:
        return float(env)
    return DEFAULT.residual

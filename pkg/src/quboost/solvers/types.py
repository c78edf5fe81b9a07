"""Solver configuration and result containers."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = ["SolveResult", "AnnealSchedule", "TabuConfig", "save_trace_csv"]


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solver run.

    ``best_energy`` is always the objective re-evaluated on ``best_bits``
    through the canonical scalar path, so it reproduces exactly.
    ``wall_time`` is informational and never serialized into artifacts.
    """

    best_bits: np.ndarray
    best_energy: float
    evaluations: int
    wall_time: float
    seed: int
    trace: np.ndarray | None = None

    def __post_init__(self):
        bits = np.asarray(self.best_bits, dtype=np.int8)
        bits.flags.writeable = False
        object.__setattr__(self, "best_bits", bits)


@dataclass(frozen=True)
class AnnealSchedule:
    """Exponential cooling: batches of proposals at T, then T *= cooling_factor,
    stopping once T drops below t_final."""

    t_initial: float
    cooling_factor: float = 0.97
    steps_per_temperature: int = 100
    t_final: float = 1e-3

    def __post_init__(self):
        if not self.t_initial > 0 or not self.t_final > 0:
            raise ValueError("temperatures must be positive")
        if not self.t_final < self.t_initial:
            raise ValueError("t_final must be below t_initial")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be >= 1")

    @classmethod
    def default_for(cls, loss_scale: float, num_vars: int) -> "AnnealSchedule":
        """Default schedule: start at the loss scale, 20 V steps per
        temperature, cool by 0.97 down to 1e-3."""
        return cls(t_initial=max(float(loss_scale), 1.0),
                   cooling_factor=0.97,
                   steps_per_temperature=20 * num_vars,
                   t_final=1e-3)


@dataclass(frozen=True)
class TabuConfig:
    """Multi-start tabu parameters. ``tabu_tenure`` and
    ``max_iterations_per_start`` default to max(8, V/10) and 500 V once the
    problem size V is known."""

    num_starts: int = 32
    tabu_tenure: int | None = None
    max_iterations_per_start: int | None = None
    aspiration: bool = True

    def __post_init__(self):
        if self.num_starts < 1:
            raise ValueError("num_starts must be >= 1")
        for name in ("tabu_tenure", "max_iterations_per_start"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be >= 1")

    def resolve(self, num_vars: int) -> tuple[int, int]:
        tenure = self.tabu_tenure
        if tenure is None:
            tenure = max(8, num_vars // 10)
        max_iter = self.max_iterations_per_start
        if max_iter is None:
            max_iter = 500 * num_vars
        return tenure, max_iter


def save_trace_csv(result: SolveResult, path) -> None:
    """Dump a solver's best-energy trace as (iteration, best_energy) rows."""
    if result.trace is None:
        raise ValueError("solver was run without trace collection")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "best_energy"])
        for i, value in enumerate(result.trace.tolist()):
            writer.writerow([i, repr(value)])

"""Ricci iteration driver: repeated prescribed-curvature solves.

Starting from a positive form gbar_1, each step solves Ric gbar_{i+1} =
c_i gbar_i and rescales g_i = c_i gbar_i, so consecutive rescaled metrics
satisfy Ric g_{i+1} = g_i (Ricci coefficients are scale invariant).  Whether
the sequence converges is not asserted; the trace records the sup-normalized
Cauchy differences so callers can judge for themselves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import curvature
from .model import DiagonalForm, SpaceModel, classify_cor_all
from .solver import SolveReport, SolverOptions, solve_prescribed_ricci


class IterationError(ValueError):
    """Raised for malformed iteration requests."""


@dataclass(frozen=True)
class IterationStep:
    index: int
    g_bar: DiagonalForm
    c: float
    g: DiagonalForm
    residual: float
    status: str

    def to_dict(self) -> dict:
        return {
            "step": self.index,
            "g_bar": [float(v) for v in self.g_bar.values],
            "c": self.c,
            "g": [float(v) for v in self.g.values],
            "residual": self.residual,
            "status": self.status,
        }


@dataclass(frozen=True)
class IterationTrace:
    """Completed steps plus convergence diagnostics.

    ``cauchy[i]`` is the sup-norm difference of the max-normalized metrics of
    steps i+1 and i+2; a truncated trace keeps the failing solve's report.
    """

    steps: tuple[IterationStep, ...]
    status: str
    cauchy: tuple[float, ...]
    failure: Optional[SolveReport] = None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "steps": [st.to_dict() for st in self.steps],
            "cauchy": list(self.cauchy),
        }

    def to_json_lines(self) -> str:
        return "".join(json.dumps(st.to_dict()) + "\n" for st in self.steps)


def ricci_iterate(
    model: SpaceModel,
    g_bar_1: DiagonalForm,
    steps: int,
    options: Optional[SolverOptions] = None,
) -> IterationTrace:
    """Run the iteration for the requested number of solve steps.

    The chain condition is re-checked for each step's target unless the model
    has the structure that makes every step unconditionally solvable; a
    failing check is advisory (the solve still runs).  On a failed solve the
    trace is truncated with that step's report attached.
    """
    if steps < 1:
        raise IterationError("need at least one step")
    if g_bar_1.support != tuple(range(1, model.s + 1)):
        raise IterationError("starting form must cover the full index set")
    opts = options or SolverOptions()
    unconditional = classify_cor_all(model)

    g_bar = g_bar_1.to_float()
    completed: list[IterationStep] = []
    failure = None
    for index in range(1, steps + 1):
        report = solve_prescribed_ricci(
            model, g_bar, options=opts, check_condition=not unconditional
        )
        if report.status != "solved":
            failure = report
            break
        g_bar_next = report.x
        c_i = report.c
        g_i = g_bar.scale(c_i)
        r_next = curvature.ricci(model, g_bar_next)
        g_vals = [float(v) for v in g_i.values]
        residual = max(
            abs(float(r_next[i]) - g_vals[i]) for i in range(model.s)
        ) / max(abs(v) for v in g_vals)
        completed.append(
            IterationStep(
                index=index,
                g_bar=g_bar,
                c=c_i,
                g=g_i,
                residual=float(residual),
                status="solved",
            )
        )
        g_bar = g_bar_next

    cauchy = []
    for prev, cur in zip(completed, completed[1:]):
        pv = [float(v) for v in prev.g.values]
        cv = [float(v) for v in cur.g.values]
        pm, cm = max(pv), max(cv)
        cauchy.append(max(abs(a / pm - b / cm) for a, b in zip(pv, cv)))

    status = "completed" if failure is None else "truncated"
    return IterationTrace(
        steps=tuple(completed),
        status=status,
        cauchy=tuple(cauchy),
        failure=failure,
    )

"""Single-vehicle solver.

One vehicle visiting every target has a common revisit period
``R = tour_cost + sum(dwells)``, so the discount factors through:
the shortest tour is optimal regardless of the dwell choice, and the
dwell vector is then optimized on its own.  Within the exact-TSP size
range the result is globally optimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dwell_opt import DwellResult, DwellSolverConfig, optimize_dwell
from .infogain import InfoParams
from .instance import Instance
from .tsp import Tour, solve_tsp


@dataclass
class SingleSolution:
    tour: Tour
    dwell: DwellResult
    objective: float
    revisit_time: float


def solve_single(
    inst: Instance,
    params: InfoParams,
    depot: int = 0,
    cfg: DwellSolverConfig | None = None,
    seed: int = 0,
) -> SingleSolution:
    """Route one vehicle from depot index ``depot`` over every target."""
    if len(params.tau) != inst.n_targets:
        raise ValueError(
            f"{len(params.tau)} sensitivities for {inst.n_targets} targets"
        )
    depot_vertex = inst.depot_vertex(depot)
    tour = solve_tsp(depot_vertex, range(inst.n_targets), inst, seed=seed)
    taus = np.asarray([params.tau[t] for t in tour.order])
    dwell = optimize_dwell(tour.cost, taus, params.alpha, cfg=cfg)
    revisit = tour.cost + float(dwell.dwells.sum())
    return SingleSolution(
        tour=tour,
        dwell=dwell,
        objective=dwell.objective,
        revisit_time=revisit,
    )

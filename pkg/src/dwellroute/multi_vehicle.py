"""Multi-vehicle solver: balanced assignment, proxy-guided local search,
and depot-perturbation restarts.

Partitioning targets across vehicles couples the routing and dwell
problems, so this module searches partitions heuristically: start from a
distance-minimal balanced assignment, then repeatedly relocate (or swap)
single targets between a "maximal" vehicle and the best receiving
vehicle.  Candidate moves are ranked with cheap proxy estimates - tour
savings for a removal, cheapest-edge splice for an insertion, carrying
dwell times over unchanged - and only realized (tours and dwells
re-optimized) when the estimate promises an improvement; a realized move
is committed only if the true objective actually improves, which keeps
the incumbent monotone.  Local optima are escaped by temporarily
relocating each depot onto a circle through its tour neighborhood and
re-searching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dwell_opt import DwellSolverConfig, optimize_dwell
from .errors import CapacityError
from .infogain import InfoParams, mutual_info, total_objective, vehicle_objective
from .instance import Instance, Point, perturb_depot, with_depots
from .tsp import Tour, solve_tsp

BRUTE_FORCE_MAX_TARGETS = 9
BRUTE_FORCE_MAX_VEHICLES = 3
PERTURB_ANGLE_STEP = math.radians(144.0)
COLOCATED_RADIUS = 0.1


class Neighborhood(Enum):
    MOVE_ONLY = "move"
    MOVE_AND_SWAP = "move-swap"


class MaximalStrategy(Enum):
    MIN_OBJECTIVE = "min-objective"
    MAX_OBJECTIVE = "max-objective"
    MOST_TARGETS = "most-targets"
    LONGEST_TOUR = "longest-tour"
    COMBINATION = "combination"


@dataclass(frozen=True)
class SearchConfig:
    neighborhood: Neighborhood = Neighborhood.MOVE_AND_SWAP
    maximal_strategy: MaximalStrategy = MaximalStrategy.COMBINATION
    top_k: int = 2
    restarts: int = 3
    perturb_rounds: int = 5
    improve_eps: float = 1e-9
    rng_seed: int = 0
    dwell: DwellSolverConfig = field(default_factory=DwellSolverConfig)

    def __post_init__(self):
        if self.top_k not in (1, 2):
            raise ValueError("top_k must be 1 or 2")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.perturb_rounds < 1:
            raise ValueError("perturb_rounds must be >= 1")


@dataclass
class VehicleRoute:
    vehicle_id: int
    tour: Tour
    dwell: np.ndarray  # aligned with tour.order
    objective: float


@dataclass
class Solution:
    instance: Instance
    routes: list[VehicleRoute]
    total: float
    params: InfoParams
    provenance: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProxyEval:
    """Cheap estimate of one removal or insertion; deltas are per-vehicle."""

    savings: float = 0.0
    insertion_increase: float = 0.0
    objective_delta: float = 0.0
    insert_position: int | None = None


def assert_valid_partition(sol: Solution) -> None:
    """Raise if routes do not partition the target set (or totals drifted)."""
    seen: set[int] = set()
    for route in sol.routes:
        ids = set(route.tour.order)
        if len(ids) != len(route.tour.order):
            raise ValueError(f"vehicle {route.vehicle_id} visits a target twice")
        if ids & seen:
            raise ValueError(f"targets {sorted(ids & seen)} appear on two routes")
        if len(route.dwell) != len(route.tour.order):
            raise ValueError(f"vehicle {route.vehicle_id} dwell/order length mismatch")
        seen |= ids
    expected = set(range(sol.instance.n_targets))
    if seen != expected:
        raise ValueError(f"unassigned targets: {sorted(expected - seen)}")
    recomputed = total_objective(r.objective for r in sol.routes)
    if not math.isclose(recomputed, sol.total, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(f"stored total {sol.total} != recomputed {recomputed}")


# --- route evaluation state -------------------------------------------------

@dataclass
class _RouteView:
    """Snapshot of one route for proxy arithmetic."""

    depot: int
    order: list[int]
    cost: float
    dwell: dict[int, float]
    info: dict[int, float]
    objective: float

    @property
    def dwell_sum(self) -> float:
        return math.fsum(self.dwell.values())

    @property
    def info_sum(self) -> float:
        return math.fsum(self.info.values())


def _view(route: VehicleRoute, params: InfoParams) -> _RouteView:
    dwell = dict(zip(route.tour.order, (float(d) for d in route.dwell)))
    info = {t: mutual_info(dwell[t], params.tau[t]) for t in route.tour.order}
    return _RouteView(
        depot=route.tour.depot,
        order=list(route.tour.order),
        cost=route.tour.cost,
        dwell=dwell,
        info=info,
        objective=route.objective,
    )


def _cycle_objective(alpha: float, cost: float, dwell_sum: float, info_sum: float) -> float:
    if info_sum <= 0.0:
        return 0.0
    return math.exp(-alpha * (cost + dwell_sum)) * info_sum


def _removal_savings(order: list[int], pos: int, depot: int, rows) -> float:
    t = order[pos]
    prev_v = order[pos - 1] if pos > 0 else depot
    next_v = order[pos + 1] if pos < len(order) - 1 else depot
    return rows[prev_v][t] + rows[t][next_v] - rows[prev_v][next_v]


def _cheapest_insertion(order: list[int], depot: int, rows, t: int) -> tuple[float, int]:
    """Minimal splice cost of ``t`` over every edge of the closed tour."""
    seq = [depot] + order + [depot]
    row_t = rows[t]
    best = math.inf
    best_pos = 0
    for pos in range(len(order) + 1):
        p, q = seq[pos], seq[pos + 1]
        inc = row_t[p] + row_t[q] - rows[p][q]
        if inc < best:
            best = inc
            best_pos = pos
    return best, best_pos


def _estimate_insertion(view: _RouteView, t: int, d_t: float, info_t: float, rows, alpha: float) -> ProxyEval:
    inc, pos = _cheapest_insertion(view.order, view.depot, rows, t)
    est_obj = _cycle_objective(
        alpha, view.cost + inc, view.dwell_sum + d_t, view.info_sum + info_t
    )
    return ProxyEval(
        insertion_increase=inc,
        objective_delta=est_obj - view.objective,
        insert_position=pos,
    )


def removal_gain(sol: Solution, vehicle: int, t: int) -> ProxyEval:
    """Estimated per-vehicle objective change from dropping target ``t``.

    The remaining dwell times are kept as-is and the tour shortens by the
    triangle savings around ``t``; a singleton route estimates to the
    empty-route objective of zero.
    """
    view = _view(sol.routes[vehicle], sol.params)
    if t not in view.dwell:
        raise ValueError(f"target {t} is not on vehicle {vehicle}'s route")
    rows = sol.instance._cost_rows
    pos = view.order.index(t)
    savings = _removal_savings(view.order, pos, view.depot, rows)
    est_obj = _cycle_objective(
        sol.params.alpha,
        view.cost - savings,
        view.dwell_sum - view.dwell[t],
        view.info_sum - view.info[t],
    )
    return ProxyEval(savings=savings, objective_delta=est_obj - view.objective)


def insertion_gain(sol: Solution, vehicle: int, t: int, d_t: float) -> ProxyEval:
    """Estimated per-vehicle objective change from splicing in target ``t``.

    ``d_t`` is the dwell time the target carries over from its current
    vehicle; existing dwell times stay untouched.  The cheapest tour edge
    (including the depot loop of an empty route) receives the target.
    """
    view = _view(sol.routes[vehicle], sol.params)
    if t in view.dwell:
        raise ValueError(f"target {t} is already on vehicle {vehicle}'s route")
    rows = sol.instance._cost_rows
    info_t = mutual_info(d_t, sol.params.tau[t])
    return _estimate_insertion(view, t, float(d_t), info_t, rows, sol.params.alpha)


# --- maximal-vehicle selection ----------------------------------------------

def select_maximal(
    sol: Solution,
    strategy: MaximalStrategy | None = None,
    top_k: int | None = None,
) -> list[int]:
    """Vehicles to try removing a target from, in priority order.

    Single strategies return their ``top_k`` best (ties to the lower
    vehicle index).  The combination strategy lists the longest-tour
    pick(s) first, then the most-targets pick(s), de-duplicated.
    """
    strategy = strategy if strategy is not None else MaximalStrategy.COMBINATION
    top_k = top_k if top_k is not None else 1
    if not sol.routes:
        raise ValueError("empty solution")

    def ranked(key) -> list[int]:
        return sorted(range(len(sol.routes)), key=lambda i: (key(sol.routes[i]), i))

    if strategy is MaximalStrategy.MIN_OBJECTIVE:
        return ranked(lambda r: r.objective)[:top_k]
    if strategy is MaximalStrategy.MAX_OBJECTIVE:
        return ranked(lambda r: -r.objective)[:top_k]
    if strategy is MaximalStrategy.MOST_TARGETS:
        return ranked(lambda r: -len(r.tour.order))[:top_k]
    if strategy is MaximalStrategy.LONGEST_TOUR:
        return ranked(lambda r: -r.tour.cost)[:top_k]
    longest = ranked(lambda r: -r.tour.cost)[:top_k]
    most = ranked(lambda r: -len(r.tour.order))[:top_k]
    out: list[int] = []
    for v in longest + most:
        if v not in out:
            out.append(v)
    return out


# --- realization ------------------------------------------------------------

_TspCache = dict


def _solve_route_tsp(inst, depot_vertex, ids, seed, cache: _TspCache | None) -> Tour:
    if cache is None:
        return solve_tsp(depot_vertex, ids, inst, seed=seed)
    key = (depot_vertex, frozenset(ids))
    tour = cache.get(key)
    if tour is None:
        tour = solve_tsp(depot_vertex, ids, inst, seed=seed)
        cache[key] = tour
    return tour


def _build_route(
    inst: Instance,
    params: InfoParams,
    cfg: SearchConfig,
    vehicle_id: int,
    ids,
    cache: _TspCache | None,
) -> VehicleRoute:
    """Tour + freshly optimized dwells for one vehicle's target set."""
    depot_vertex = inst.depot_vertex(vehicle_id)
    tour = _solve_route_tsp(inst, depot_vertex, sorted(ids), cfg.rng_seed, cache)
    if not tour.order:
        return VehicleRoute(vehicle_id, tour, np.zeros(0), 0.0)
    taus = [params.tau[t] for t in tour.order]
    res = optimize_dwell(tour.cost, taus, params.alpha, cfg=cfg.dwell)
    return VehicleRoute(vehicle_id, tour, res.dwells, res.objective)


def _carry_route(
    inst: Instance,
    params: InfoParams,
    cfg: SearchConfig,
    vehicle_id: int,
    ids,
    dwell_by_target: dict[int, float],
    cache: _TspCache | None,
) -> VehicleRoute:
    """Tour re-solved, dwell times carried over per target unchanged."""
    depot_vertex = inst.depot_vertex(vehicle_id)
    tour = _solve_route_tsp(inst, depot_vertex, sorted(ids), cfg.rng_seed, cache)
    dwell = np.array([dwell_by_target[t] for t in tour.order])
    taus = [params.tau[t] for t in tour.order]
    obj = vehicle_objective(tour.cost, dwell, taus, params.alpha)
    return VehicleRoute(vehicle_id, tour, dwell, obj)


def _replace_routes(sol: Solution, new_routes: dict[int, VehicleRoute]) -> Solution:
    routes = [new_routes.get(i, r) for i, r in enumerate(sol.routes)]
    return Solution(
        instance=sol.instance,
        routes=routes,
        total=total_objective(r.objective for r in routes),
        params=sol.params,
        provenance=dict(sol.provenance),
    )


# --- neighborhoods ----------------------------------------------------------

def one_point_move(
    sol: Solution, cfg: SearchConfig, tsp_cache: _TspCache | None = None
) -> Solution | None:
    """Relocate one target off a maximal vehicle; None when nothing commits.

    Removal candidates are tried in decreasing order of estimated gain;
    each goes to the other vehicle with the best estimated insertion.
    A promising estimate triggers a real re-solve of both vehicles, and
    the move is kept only if the realized total improves.
    """
    m = len(sol.routes)
    if m < 2:
        return None
    rows = sol.instance._cost_rows
    alpha = sol.params.alpha
    views = [_view(r, sol.params) for r in sol.routes]
    for v in select_maximal(sol, cfg.maximal_strategy, cfg.top_k):
        view_v = views[v]
        if not view_v.order:
            continue
        removals = []
        for pos, t in enumerate(view_v.order):
            savings = _removal_savings(view_v.order, pos, view_v.depot, rows)
            est = _cycle_objective(
                alpha,
                view_v.cost - savings,
                view_v.dwell_sum - view_v.dwell[t],
                view_v.info_sum - view_v.info[t],
            )
            removals.append((t, savings, est - view_v.objective))
        removals.sort(key=lambda r: (-r[2], r[0]))
        for t, savings, removal_delta in removals:
            d_t = view_v.dwell[t]
            info_t = view_v.info[t]
            best_w, best_ins = None, None
            for w in range(m):
                if w == v:
                    continue
                ins = _estimate_insertion(views[w], t, d_t, info_t, rows, alpha)
                if best_ins is None or ins.objective_delta > best_ins.objective_delta:
                    best_w, best_ins = w, ins
            if best_ins is None:
                continue
            if removal_delta + best_ins.objective_delta <= cfg.improve_eps:
                continue
            new_v = _build_route(
                sol.instance, sol.params, cfg, v,
                [x for x in view_v.order if x != t], tsp_cache,
            )
            new_w = _build_route(
                sol.instance, sol.params, cfg, best_w,
                views[best_w].order + [t], tsp_cache,
            )
            candidate = _replace_routes(sol, {v: new_v, best_w: new_w})
            if candidate.total > sol.total + cfg.improve_eps:
                return candidate
            # realization fell short of the estimate: revert, next target
    return None


def one_point_swap(
    sol: Solution, cfg: SearchConfig, tsp_cache: _TspCache | None = None
) -> Solution | None:
    """Exchange one target between a maximal vehicle and the best receiver.

    The outgoing target goes to the vehicle with the best estimated
    insertion; return candidates from that vehicle are then ranked by
    removal gain measured against its *estimated* post-insertion state
    (the just-arrived target itself is not offered back).  Realization
    and commit follow the same re-solve-and-verify rule as the move.
    """
    m = len(sol.routes)
    if m < 2:
        return None
    rows = sol.instance._cost_rows
    alpha = sol.params.alpha
    views = [_view(r, sol.params) for r in sol.routes]
    for v in select_maximal(sol, cfg.maximal_strategy, cfg.top_k):
        view_v = views[v]
        if not view_v.order:
            continue
        removals = []
        for pos, t in enumerate(view_v.order):
            savings = _removal_savings(view_v.order, pos, view_v.depot, rows)
            est = _cycle_objective(
                alpha,
                view_v.cost - savings,
                view_v.dwell_sum - view_v.dwell[t],
                view_v.info_sum - view_v.info[t],
            )
            removals.append((t, savings, est - view_v.objective))
        removals.sort(key=lambda r: (-r[2], r[0]))
        for t, savings_t, _removal_delta in removals:
            d_t = view_v.dwell[t]
            info_t = view_v.info[t]
            best_i, best_ins = None, None
            for w in range(m):
                if w == v:
                    continue
                ins = _estimate_insertion(views[w], t, d_t, info_t, rows, alpha)
                if best_ins is None or ins.objective_delta > best_ins.objective_delta:
                    best_i, best_ins = w, ins
            if best_ins is None:
                continue
            view_i = views[best_i]
            # estimated state of the receiving vehicle after taking t
            est_i_order = list(view_i.order)
            est_i_order.insert(best_ins.insert_position, t)
            est_i_cost = view_i.cost + best_ins.insertion_increase
            est_i_dwell_sum = view_i.dwell_sum + d_t
            est_i_info_sum = view_i.info_sum + info_t
            est_i_obj = view_i.objective + best_ins.objective_delta
            # estimated state of the maximal vehicle after giving t up
            est_v_order = [x for x in view_v.order if x != t]
            est_v_cost = view_v.cost - savings_t
            est_v_dwell_sum = view_v.dwell_sum - d_t
            est_v_info_sum = view_v.info_sum - info_t

            returns = []
            for u in view_i.order:  # original residents only; t excluded
                pos_u = est_i_order.index(u)
                sav_u = _removal_savings(est_i_order, pos_u, view_i.depot, rows)
                est_after = _cycle_objective(
                    alpha,
                    est_i_cost - sav_u,
                    est_i_dwell_sum - view_i.dwell[u],
                    est_i_info_sum - view_i.info[u],
                )
                returns.append((u, est_after, est_after - est_i_obj))
            returns.sort(key=lambda r: (-r[2], r[0]))
            for u, est_i_after, _ in returns:
                inc_u, _pos = _cheapest_insertion(est_v_order, view_v.depot, rows, u)
                est_v_after = _cycle_objective(
                    alpha,
                    est_v_cost + inc_u,
                    est_v_dwell_sum + view_i.dwell[u],
                    est_v_info_sum + view_i.info[u],
                )
                est_total_delta = (est_v_after - view_v.objective) + (
                    est_i_after - view_i.objective
                )
                if est_total_delta <= cfg.improve_eps:
                    continue
                new_v = _build_route(
                    sol.instance, sol.params, cfg, v, est_v_order + [u], tsp_cache
                )
                new_i = _build_route(
                    sol.instance, sol.params, cfg, best_i,
                    [x for x in view_i.order if x != u] + [t], tsp_cache,
                )
                candidate = _replace_routes(sol, {v: new_v, best_i: new_i})
                if candidate.total > sol.total + cfg.improve_eps:
                    return candidate
    return None


def local_search(
    sol: Solution,
    cfg: SearchConfig,
    tsp_cache: _TspCache | None = None,
    trace: list | None = None,
) -> Solution:
    """Apply move (and, if configured, swap) steps until neither improves."""
    if tsp_cache is None:
        tsp_cache = {}
    while True:
        nxt = one_point_move(sol, cfg, tsp_cache)
        if nxt is None and cfg.neighborhood is Neighborhood.MOVE_AND_SWAP:
            nxt = one_point_swap(sol, cfg, tsp_cache)
        if nxt is None:
            return sol
        sol = nxt
        if trace is not None:
            trace.append(sol.total)


# --- perturbation -----------------------------------------------------------

def _depot_reach(route: VehicleRoute, inst: Instance) -> float:
    """Average distance from the depot to its two tour neighbors (0 if idle)."""
    if not route.tour.order:
        return 0.0
    d = route.tour.depot
    first, last = route.tour.order[0], route.tour.order[-1]
    return 0.5 * (inst.cost(d, first) + inst.cost(d, last))


def perturb_and_search(
    sol: Solution,
    cfg: SearchConfig,
    trace: list | None = None,
    tsp_cache: _TspCache | None = None,
) -> Solution:
    """Escape local optima by searching from temporarily displaced depots.

    Each depot hops onto a circle of radius equal to its average distance
    to its tour neighbors; the allocation found on the displaced instance
    is then re-evaluated (tours and dwells rebuilt) at the true depots.
    Non-improving rounds advance every angle by 144 degrees, and after
    ``cfg.perturb_rounds`` consecutive failures the schedule would repeat,
    so the loop stops; an improvement resets it with fresh angles.
    """
    inst = sol.instance
    m = len(sol.routes)
    rng = np.random.default_rng([cfg.rng_seed, 1])
    if tsp_cache is None:
        tsp_cache = {}
    incumbent = sol
    angles = rng.uniform(0.0, 2.0 * math.pi, size=m)
    stall = 0
    while stall < cfg.perturb_rounds:
        moved = [
            perturb_depot(inst.depots[j], _depot_reach(incumbent.routes[j], inst), angles[j])
            for j in range(m)
        ]
        moved_inst = with_depots(inst, moved)
        moved_cache: _TspCache = {}
        carried = [
            _carry_route(
                moved_inst, sol.params, cfg, j,
                incumbent.routes[j].tour.order,
                dict(zip(incumbent.routes[j].tour.order, map(float, incumbent.routes[j].dwell))),
                moved_cache,
            )
            for j in range(m)
        ]
        moved_sol = Solution(
            instance=moved_inst,
            routes=carried,
            total=total_objective(r.objective for r in carried),
            params=sol.params,
            provenance=dict(sol.provenance),
        )
        moved_sol = local_search(moved_sol, cfg, moved_cache)
        restored_routes = [
            _build_route(inst, sol.params, cfg, j, moved_sol.routes[j].tour.order, tsp_cache)
            for j in range(m)
        ]
        restored = Solution(
            instance=inst,
            routes=restored_routes,
            total=total_objective(r.objective for r in restored_routes),
            params=sol.params,
            provenance=dict(sol.provenance),
        )
        candidate = local_search(restored, cfg, tsp_cache)
        if candidate.total > incumbent.total + cfg.improve_eps:
            incumbent = candidate
            stall = 0
            angles = rng.uniform(0.0, 2.0 * math.pi, size=m)
            if trace is not None:
                trace.append(incumbent.total)
        else:
            stall += 1
            angles = angles + PERTURB_ANGLE_STEP
    return incumbent


# --- initial solution and top-level solve ------------------------------------

def _effective_depot_points(inst: Instance, rng) -> list[Point]:
    """Depot stand-ins for the assignment: co-located groups fan out on a
    radius-0.1 circle (random base angle, symmetric spacing) so that
    distinct vehicles see distinct distances; true depots are untouched."""
    groups: dict[tuple[float, float], list[int]] = {}
    for j, p in enumerate(inst.depots):
        groups.setdefault((p.x, p.y), []).append(j)
    effective = list(inst.depots)
    for (_, _), members in groups.items():
        g = len(members)
        if g < 2:
            continue
        base = rng.uniform(0.0, 2.0 * math.pi)
        for i, j in enumerate(members):
            effective[j] = perturb_depot(
                inst.depots[j], COLOCATED_RADIUS, base + 2.0 * math.pi * i / g
            )
    return effective


def balanced_counts(n: int, m: int) -> list[int]:
    """Targets per vehicle: the first ``n mod m`` vehicles take the ceiling."""
    q, r = divmod(n, m)
    return [q + 1 if j < r else q for j in range(m)]


def initial_assignment(
    inst: Instance,
    params: InfoParams,
    cfg: SearchConfig | None = None,
    seed: int | None = None,
) -> Solution:
    """Balanced distance-minimal starting solution.

    Every vehicle receives its quota of targets (quotas differ by at most
    one) minimizing the total target-to-depot distance; the quota
    constraint is encoded by expanding each vehicle into that many
    assignment slots and solving the square matching exactly.
    """
    cfg = cfg or SearchConfig()
    if len(params.tau) != inst.n_targets:
        raise ValueError(f"{len(params.tau)} sensitivities for {inst.n_targets} targets")
    n, m = inst.n_targets, inst.n_vehicles
    rng = np.random.default_rng([cfg.rng_seed if seed is None else seed, 0])
    effective = _effective_depot_points(inst, rng)
    counts = balanced_counts(n, m)
    slot_vehicle = [j for j, c in enumerate(counts) for _ in range(c)]
    cost = np.empty((n, n))
    for col, j in enumerate(slot_vehicle):
        dep = effective[j]
        cost[:, col] = [t.distance_to(dep) for t in inst.targets]
    row_ind, col_ind = linear_sum_assignment(cost)
    assigned: list[list[int]] = [[] for _ in range(m)]
    for t, col in zip(row_ind, col_ind):
        assigned[slot_vehicle[col]].append(int(t))
    routes = [
        _build_route(inst, params, cfg, j, assigned[j], None) for j in range(m)
    ]
    return Solution(
        instance=inst,
        routes=routes,
        total=total_objective(r.objective for r in routes),
        params=params,
        provenance={"assignment_cost": float(cost[row_ind, col_ind].sum())},
    )


def _expand_vehicles(inst: Instance, m: int | None) -> Instance:
    if m is None or m == inst.n_vehicles:
        return inst
    if m < inst.n_vehicles:
        raise ValueError(
            f"requested {m} vehicles but the instance defines {inst.n_vehicles} depots"
        )
    depots = [inst.depots[j % inst.n_vehicles] for j in range(m)]
    return with_depots(inst, depots)


def _restart_seed(root: int, r: int) -> int:
    if r == 0:
        return root
    return int(np.random.SeedSequence([root & 0xFFFFFFFF, r]).generate_state(1)[0])


def solve_multi(
    inst: Instance,
    params: InfoParams,
    cfg: SearchConfig | None = None,
    m: int | None = None,
) -> Solution:
    """Best of ``cfg.restarts`` independent assignment/search/perturb runs.

    ``m`` may exceed the instance's depot count, in which case vehicles
    share depots cyclically (the assignment step tells them apart).
    """
    cfg = cfg or SearchConfig()
    inst = _expand_vehicles(inst, m)
    best: Solution | None = None
    best_meta: dict = {}
    for r in range(cfg.restarts):
        seed_r = _restart_seed(cfg.rng_seed, r)
        cfg_r = replace(cfg, rng_seed=seed_r)
        start = initial_assignment(inst, params, cfg_r)
        trace = [start.total]
        cache: _TspCache = {}
        searched = local_search(start, cfg_r, cache, trace)
        final = perturb_and_search(searched, cfg_r, trace, cache)
        if best is None or final.total > best.total:
            best = final
            best_meta = {
                "restart": r,
                "restart_seed": seed_r,
                "initial_objective": start.total,
                "incumbent_trace": trace,
            }
    assert best is not None
    best.provenance = {
        "seed": cfg.rng_seed,
        "restarts": cfg.restarts,
        "strategy": cfg.maximal_strategy.value,
        "neighborhood": cfg.neighborhood.value,
        "top_k": cfg.top_k,
        **best_meta,
    }
    return best


def brute_force_multi(
    inst: Instance,
    params: InfoParams,
    m: int | None = None,
) -> Solution:
    """Exact reference: enumerate every assignment of targets to vehicles.

    Each part is routed exactly and its dwells optimized; sizes are capped
    hard because assignments grow as m^n.
    """
    inst = _expand_vehicles(inst, m)
    n, m_eff = inst.n_targets, inst.n_vehicles
    if n > BRUTE_FORCE_MAX_TARGETS or m_eff > BRUTE_FORCE_MAX_VEHICLES:
        raise CapacityError(
            f"brute force capped at {BRUTE_FORCE_MAX_TARGETS} targets / "
            f"{BRUTE_FORCE_MAX_VEHICLES} vehicles, got n={n}, m={m_eff}"
        )
    cfg = SearchConfig(restarts=1)
    part_cache: dict[tuple[int, frozenset], VehicleRoute] = {}

    def route_for(j: int, ids: frozenset) -> VehicleRoute:
        key = (j, ids)
        route = part_cache.get(key)
        if route is None:
            route = _build_route(inst, params, cfg, j, sorted(ids), None)
            part_cache[key] = route
        return route

    best_assign = None
    best_total = -math.inf
    for code in range(m_eff**n):
        parts: list[list[int]] = [[] for _ in range(m_eff)]
        c = code
        for t in range(n):
            parts[c % m_eff].append(t)
            c //= m_eff
        total = total_objective(
            route_for(j, frozenset(p)).objective for j, p in enumerate(parts)
        )
        if total > best_total:
            best_total = total
            best_assign = parts
    assert best_assign is not None
    routes = [route_for(j, frozenset(p)) for j, p in enumerate(best_assign)]
    return Solution(
        instance=inst,
        routes=routes,
        total=total_objective(r.objective for r in routes),
        params=params,
        provenance={"solver": "brute-force"},
    )

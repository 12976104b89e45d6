"""Closed-tour construction: exact bitmask DP at small sizes, local search above.

Both solvers return a `Tour` anchored at a depot vertex.  The exact solver
is the oracle for everything else in the package; the heuristic is
nearest-neighbor construction followed by alternating 2-opt and Or-opt
passes run to a joint local optimum, with scan orders shuffled from the
seed so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .instance import Instance

HELD_KARP_HARD_CAP = 18
EXACT_DISPATCH_CAP = 13
_EPS = 1e-9


@dataclass(frozen=True)
class Tour:
    """Closed route: depot -> order[0] -> ... -> order[-1] -> depot."""

    depot: int
    order: tuple[int, ...]
    cost: float


def tour_cost(depot: int, order, inst: Instance) -> float:
    """Exact closed-loop cost; 0 for an empty visit order."""
    if not order:
        inst.cost(depot, depot)  # id validation
        return 0.0
    total = inst.cost(depot, order[0])
    for a, b in zip(order, order[1:]):
        total += inst.cost(a, b)
    return total + inst.cost(order[-1], depot)


def recompute_cost(t: Tour, inst: Instance) -> float:
    return tour_cost(t.depot, t.order, inst)


def held_karp(depot: int, targets, inst: Instance) -> Tour:
    """Provably minimum-cost closed tour over ``targets`` from ``depot``.

    Bitmask dynamic programming; O(2^k k^2) time, so sizes above
    HELD_KARP_HARD_CAP are rejected.
    """
    ids = sorted(targets)
    k = len(ids)
    if k > HELD_KARP_HARD_CAP:
        raise CapacityError(f"exact tour solver capped at {HELD_KARP_HARD_CAP} targets, got {k}")
    if k == 0:
        return Tour(depot=depot, order=(), cost=0.0)
    rows = inst._cost_rows
    depot_row = rows[depot]
    ct = [[rows[a][b] for b in ids] for a in ids]
    cd = [depot_row[a] for a in ids]

    full = (1 << k) - 1
    inf = math.inf
    dp = [inf] * ((full + 1) * k)
    parent = [-1] * ((full + 1) * k)
    for i in range(k):
        dp[(1 << i) * k + i] = cd[i]

    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        bits = []
        m = mask
        while m:
            low = m & -m
            bits.append(low.bit_length() - 1)
            m ^= low
        base = mask * k
        for last in bits:
            pmask = mask ^ (1 << last)
            pbase = pmask * k
            col = ct[last]
            best = inf
            arg = -1
            for prev in bits:
                if prev == last:
                    continue
                cand = dp[pbase + prev]
                if cand < inf:
                    cand += col[prev]
                    if cand < best:
                        best = cand
                        arg = prev
            dp[base + last] = best
            parent[base + last] = arg

    base = full * k
    best = inf
    last = -1
    for i in range(k):
        cand = dp[base + i] + cd[i]
        if cand < best:
            best = cand
            last = i
    order_rev = []
    mask = full
    while last != -1:
        order_rev.append(ids[last])
        nxt = parent[mask * k + last]
        mask ^= 1 << last
        last = nxt
    order = tuple(reversed(order_rev))
    return Tour(depot=depot, order=order, cost=tour_cost(depot, order, inst))


def _nearest_neighbor(depot: int, ids: list[int], rows) -> list[int]:
    remaining = list(ids)
    order = []
    current = depot
    while remaining:
        row = rows[current]
        best = min(remaining, key=lambda t: (row[t], t))
        order.append(best)
        remaining.remove(best)
        current = best
    return order


def _two_opt(order: list[int], depot: int, rows, scan: list[int]) -> bool:
    """First-improvement 2-opt to local optimality; True if anything changed."""
    n = len(order)
    improved_any = False
    improved = True
    while improved:
        improved = False
        for i in scan:
            if i >= n - 1:
                continue
            a = depot if i == 0 else order[i - 1]
            oi = order[i]
            ra = rows[a]
            roi = rows[oi]
            for j in range(i + 1, n):
                oj = order[j]
                b = depot if j == n - 1 else order[j + 1]
                delta = ra[oj] + roi[b] - ra[oi] - rows[oj][b]
                if delta < -_EPS:
                    order[i : j + 1] = reversed(order[i : j + 1])
                    improved = True
                    improved_any = True
                    break
            if improved:
                break
    return improved_any


def _or_opt(order: list[int], depot: int, rows, scan: list[int]) -> bool:
    """Relocate segments of length 1-3 (either orientation) until no gain."""
    improved_any = False
    improved = True
    while improved:
        improved = False
        n = len(order)
        for i in scan:
            if improved:
                break
            for seg_len in (1, 2, 3):
                if i + seg_len > n:
                    continue
                seg = order[i : i + seg_len]
                prev_v = depot if i == 0 else order[i - 1]
                next_v = depot if i + seg_len == n else order[i + seg_len]
                removal = (
                    rows[prev_v][seg[0]] + rows[seg[-1]][next_v] - rows[prev_v][next_v]
                )
                rest = order[:i] + order[i + seg_len :]
                # candidate insertion edges of the remaining closed tour
                seq = [depot] + rest + [depot]
                done = False
                for pos in range(len(rest) + 1):
                    if pos == i:  # reinserting where it came from is a no-op
                        continue
                    p, q = seq[pos], seq[pos + 1]
                    base = rows[p][q]
                    fwd = rows[p][seg[0]] + rows[seg[-1]][q] - base
                    rev = rows[p][seg[-1]] + rows[seg[0]][q] - base
                    if rev < fwd - 1e-15:
                        ins, piece = rev, seg[::-1]
                    else:
                        ins, piece = fwd, seg
                    if ins - removal < -_EPS:
                        order[:] = rest[:pos] + piece + rest[pos:]
                        improved = True
                        improved_any = True
                        done = True
                        break
                if done:
                    break
    return improved_any


def solve_tsp_heuristic(depot: int, targets, inst: Instance, seed: int = 0) -> Tour:
    """Nearest-neighbor start, then alternating 2-opt / Or-opt to a joint fixpoint."""
    ids = sorted(targets)
    if not ids:
        return Tour(depot=depot, order=(), cost=0.0)
    rows = inst._cost_rows
    rng = np.random.default_rng(seed)
    order = _nearest_neighbor(depot, ids, rows)
    scan = [int(i) for i in rng.permutation(len(order))]
    while True:
        changed = _two_opt(order, depot, rows, scan)
        changed |= _or_opt(order, depot, rows, scan)
        if not changed:
            break
    order_t = tuple(order)
    return Tour(depot=depot, order=order_t, cost=tour_cost(depot, order_t, inst))


def solve_tsp(depot: int, targets, inst: Instance, seed: int = 0) -> Tour:
    """Exact solve up to EXACT_DISPATCH_CAP targets, heuristic beyond."""
    ids = list(targets)
    if len(ids) <= EXACT_DISPATCH_CAP:
        return held_karp(depot, ids, inst)
    return solve_tsp_heuristic(depot, ids, inst, seed=seed)

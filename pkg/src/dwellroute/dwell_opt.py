"""Dwell-time optimization for a fixed closed tour.

With the tour fixed, the per-cycle payoff is
``exp(-alpha (T + sum d)) * sum_i I(d_i)`` over dwell times ``d >= 0``.
Its log is concave, so projected gradient ascent with an Armijo line
search finds the global optimum; a golden-section + derivative-bisection
scalar solver for the all-equal-sensitivity case serves as an independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericsError
from .infogain import info_derivs, info_values, mutual_info, mutual_info_deriv

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InitMode(Enum):
    TAU = "tau"
    WARM_START = "warm-start"


@dataclass(frozen=True)
class DwellSolverConfig:
    grad_tol: float = 1e-8
    max_iters: int = 10_000
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    init_mode: InitMode = InitMode.TAU

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must be in (0, 1)")
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must be in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class DwellResult:
    dwells: np.ndarray
    objective: float
    iterations: int
    converged: bool
    first_order_residual: float


def _validate(taus: np.ndarray, alpha: float) -> None:
    if taus.size == 0:
        raise ValueError("need at least one target sensitivity")
    if not np.all(taus > 0) or not np.all(np.isfinite(taus)):
        raise ValueError("sensitivities must be finite and > 0")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"discount rate must be finite and > 0, got {alpha!r}")


def log_objective_gradient(d, taus, alpha: float) -> np.ndarray:
    """Gradient of ``-alpha sum d + log sum_i I(d_i)``.

    Component k is ``I'(d_k) / sum_j I(d_j) - alpha``.  Undefined when every
    dwell is zero (the log has nothing to stand on); callers must start at
    a positive point.
    """
    d = np.asarray(d, dtype=float)
    taus = np.asarray(taus, dtype=float)
    _validate(taus, alpha)
    info_sum = float(info_values(d, taus).sum())
    if info_sum <= 0.0:
        raise ValueError("gradient undefined at an all-zero dwell vector")
    return info_derivs(d, taus) / info_sum - alpha


def kkt_residual(d, taus, alpha: float) -> float:
    """Max violation of the stationarity system for the dwell problem.

    At an optimum, ``I'(d_i) = alpha * sum_j I(d_j)`` wherever ``d_i > 0``
    and ``I'(0+) <= alpha * sum_j I(d_j)`` wherever ``d_i = 0``.
    """
    d = np.asarray(d, dtype=float)
    taus = np.asarray(taus, dtype=float)
    info_sum = float(info_values(d, taus).sum())
    u = info_derivs(d, taus) - alpha * info_sum
    at_zero = d == 0.0
    u[at_zero] = np.maximum(u[at_zero], 0.0)
    return float(np.max(np.abs(u)))


def optimize_dwell(
    tour_cost: float,
    taus,
    alpha: float,
    cfg: DwellSolverConfig | None = None,
    warm_start=None,
    trace: list | None = None,
) -> DwellResult:
    """Maximize the dwell payoff for a tour of cost ``tour_cost``.

    The tour cost scales the objective by a constant and does not move the
    argmax; it is included so the reported objective is the vehicle's full
    discounted gain.  Convergence requires the projected gradient of the
    log objective *and* the stationarity residual (`kkt_residual`) to fall
    below ``cfg.grad_tol``.
    """
    cfg = cfg or DwellSolverConfig()
    taus = np.asarray(taus, dtype=float)
    _validate(taus, alpha)
    if not (tour_cost >= 0 and math.isfinite(tour_cost)):
        raise ValueError(f"tour cost must be finite and >= 0, got {tour_cost!r}")

    if cfg.init_mode is InitMode.WARM_START and warm_start is not None:
        d = np.asarray(warm_start, dtype=float).copy()
        if d.shape != taus.shape or np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValueError("warm start must be a nonnegative vector matching taus")
        if float(info_values(d, taus).sum()) <= 0.0:
            d = taus.copy()  # all-zero start has no gradient; fall back
    else:
        d = taus.copy()

    def log_obj(dv: np.ndarray) -> float:
        info_sum = float(info_values(dv, taus).sum())
        if info_sum <= 0.0:
            return -math.inf  # all-zero dwells; line search will backtrack
        return -alpha * float(dv.sum()) + math.log(info_sum)

    g_val = log_obj(d)
    step = 1.0
    iterations = 0
    converged = False
    residual = math.inf
    best_residual = math.inf
    best_residual_iter = 0
    prev_d: np.ndarray | None = None
    prev_grad: np.ndarray | None = None
    for iterations in range(1, cfg.max_iters + 1):
        info_sum = float(info_values(d, taus).sum())
        derivs = info_derivs(d, taus)
        grad = derivs / info_sum - alpha
        u = derivs - alpha * info_sum
        at_zero = d == 0.0
        proj_g = np.where(at_zero, np.maximum(grad, 0.0), grad)
        proj_u = np.where(at_zero, np.maximum(u, 0.0), u)
        residual = float(np.max(np.abs(proj_u)))
        if not math.isfinite(residual) or not math.isfinite(g_val):
            raise NumericsError(
                f"non-finite state after {iterations} iterations: d={d!r}, value={g_val!r}"
            )
        if trace is not None:
            trace.append(g_val)
        if max(residual, float(np.max(np.abs(proj_g)))) < cfg.grad_tol:
            converged = True
            break
        if residual < 0.999 * best_residual:
            best_residual = residual
            best_residual_iter = iterations
        elif iterations - best_residual_iter > 250:
            break  # residual stopped improving: float-resolution floor

        # spectral (Barzilai-Borwein) trial step; backtracking keeps ascent
        spectral = False
        if prev_d is not None:
            s = d - prev_d
            y = grad - prev_grad
            sy = float(s @ y)  # <= 0 for a concave objective
            if sy < -1e-300:
                step = min(max(float(s @ s) / -sy, 1e-12), 1e14)
                spectral = True
        prev_d, prev_grad = d, grad

        accepted = False
        t = step
        while t > 1e-20:
            d_new = np.maximum(d + t * grad, 0.0)
            move = d_new - d
            gain_floor = cfg.armijo_c * float(grad @ move)
            g_new = log_obj(d_new)
            if g_new >= g_val + gain_floor and math.isfinite(g_new):
                d = d_new
                g_val = g_new
                if not spectral:
                    step = min(t / cfg.backtrack_factor, 1e14)
                accepted = True
                break
            t *= cfg.backtrack_factor
        if not accepted:
            break  # line search exhausted: numerically stationary

    info_sum = float(info_values(d, taus).sum())
    objective = math.exp(-alpha * (tour_cost + float(d.sum()))) * info_sum
    return DwellResult(
        dwells=d,
        objective=objective,
        iterations=iterations,
        converged=converged,
        first_order_residual=residual,
    )


def optimize_dwell_symmetric(n: int, tau: float, alpha: float) -> float:
    """Optimal common dwell when all ``n`` targets share sensitivity ``tau``.

    Maximizes ``exp(-alpha n d) * n * I(d)``, which is unimodal in ``d``.
    Golden-section search narrows the bracket, then bisection on the sign
    of the log-objective derivative pins the maximizer; plain golden
    section alone stalls on the flat top where objective differences sink
    below float precision.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (tau > 0 and math.isfinite(tau)):
        raise ValueError(f"sensitivity must be finite and > 0, got {tau!r}")
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"discount rate must be finite and > 0, got {alpha!r}")

    def slope(d: float) -> float:
        # d/dd of (-alpha n d + log I(d)); positive left of the optimum,
        # +inf at 0 where the log objective has an open cliff
        if d <= 0.0:
            return math.inf
        return mutual_info_deriv(d, tau) / mutual_info(d, tau) - alpha * n

    hi = tau
    while slope(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NumericsError("no downhill bracket found; discount rate too small")

    def value(d: float) -> float:
        return math.exp(-alpha * n * d) * mutual_info(d, tau)

    lo = 0.0
    a = lo + (1.0 - _GOLDEN) * (hi - lo)
    b = lo + _GOLDEN * (hi - lo)
    fa, fb = value(a), value(b)
    while hi - lo > 1e-6 * max(1.0, hi):
        if fa < fb:
            lo, a, fa = a, b, fb
            b = lo + _GOLDEN * (hi - lo)
            fb = value(b)
        else:
            hi, b, fb = b, a, fa
            a = lo + (1.0 - _GOLDEN) * (hi - lo)
            fa = value(a)

    # On the flat top, objective comparisons sink into float noise and the
    # golden bracket can drift off the maximizer by the noise plateau.
    # The log-objective derivative stays sharp there, so re-straddle its
    # (unique) sign change around the bracket and bisect it down.
    pad = hi - lo
    while slope(lo) <= 0.0:
        lo = max(0.0, lo - pad)
        pad *= 2.0
    pad = hi - lo
    while slope(hi) > 0.0:
        hi += pad
        pad *= 2.0
    while hi - lo > 1e-12 * max(1.0, hi) and hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

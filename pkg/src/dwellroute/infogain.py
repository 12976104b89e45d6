"""Information-gain model for a binary classifier fed by vehicle observations.

Dwelling for time ``d`` at a point of interest raises the probability that
the operator labels it correctly to ``1 - exp(-sqrt(d/tau))/2``, where
``tau`` is the target's sensitivity to observation time.  The payoff for
the visit is the mutual information between true and assigned labels (in
nats, bounded by ``log 2`` for the symmetric fifty-fifty prior used here),
and a revisit of period ``R`` discounts it by ``exp(-alpha * R)``.

All functions are pure; scalar versions live alongside vectorized
counterparts used by the dwell-time optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG2 = math.log(2.0)

__all__ = [
    "LOG2",
    "InfoParams",
    "classification_prob",
    "mutual_info",
    "mutual_info_deriv",
    "discounted_gain",
    "vehicle_objective",
    "total_objective",
    "info_values",
    "info_derivs",
]


def _check_domain(d: float, tau: float) -> None:
    if not (d >= 0.0) or not math.isfinite(d):
        raise ValueError(f"dwell time must be finite and >= 0, got {d!r}")
    if not (tau > 0.0) or not math.isfinite(tau):
        raise ValueError(f"sensitivity must be finite and > 0, got {tau!r}")


def classification_prob(d: float, tau: float) -> float:
    """Probability of a correct label after dwelling ``d`` at sensitivity ``tau``.

    Starts at 0.5 (a coin flip with no observation) and saturates toward 1.
    """
    _check_domain(d, tau)
    return 1.0 - 0.5 * math.exp(-math.sqrt(d / tau))


def mutual_info(d: float, tau: float) -> float:
    """Label mutual information (nats) gained by dwelling ``d`` at one target.

    Evaluates ``P log P + (1-P) log(1-P) + log 2`` with ``P`` the
    classification probability.  Written in terms of ``s = sqrt(d/tau)``
    so the ``(1-P) log(1-P)`` term stays exact as ``P -> 1``:
    ``1 - P = exp(-s)/2`` and its log is ``-(log 2 + s)``.
    """
    _check_domain(d, tau)
    s = math.sqrt(d / tau)
    one_minus_p = 0.5 * math.exp(-s)
    p = 1.0 - one_minus_p
    return p * math.log1p(-one_minus_p) - one_minus_p * (LOG2 + s) + LOG2


def mutual_info_deriv(d: float, tau: float) -> float:
    """Marginal information per unit dwell time; nonnegative, non-increasing.

    ``P'(d) * log(P / (1-P))`` with ``P'(d) = exp(-s) / (4 tau s)``.  The
    0/0 corner at ``d = 0`` is defined by its finite limit ``1/(2 tau)``.
    """
    _check_domain(d, tau)
    if d == 0.0:
        return 0.5 / tau
    s = math.sqrt(d / tau)
    # log(P/(1-P)) = log(2 e^s - 1); two algebraically equal forms, each
    # stable on its side of s = 1.
    if s <= 1.0:
        logit = math.log1p(2.0 * math.expm1(s))
    else:
        logit = s + LOG2 + math.log1p(-0.5 * math.exp(-s))
    return math.exp(-s) / (4.0 * tau * s) * logit


def discounted_gain(d: float, R: float, tau: float, alpha: float) -> float:
    """Information gain after discounting by the revisit period ``R``."""
    _check_domain(d, tau)
    if not (R >= 0.0):
        raise ValueError(f"revisit time must be >= 0, got {R!r}")
    return math.exp(-alpha * R) * mutual_info(d, tau)


def vehicle_objective(tour_cost, dwells, taus, alpha: float) -> float:
    """Discounted information collected by one vehicle.

    ``exp(-alpha (tour_cost + sum d)) * sum_i I(d_i)``; the revisit period
    charged to every target is the full cycle: travel plus all dwells.
    An empty target list contributes 0 by convention.
    """
    if len(dwells) != len(taus):
        raise ValueError(f"{len(dwells)} dwell times for {len(taus)} sensitivities")
    if not (tour_cost >= 0.0):
        raise ValueError(f"tour cost must be >= 0, got {tour_cost!r}")
    if len(dwells) == 0:
        return 0.0
    info = math.fsum(mutual_info(d, t) for d, t in zip(dwells, taus))
    cycle = tour_cost + math.fsum(dwells)
    return math.exp(-alpha * cycle) * info


def total_objective(per_vehicle) -> float:
    """Sum of per-vehicle objectives; empty fleet gives 0."""
    return math.fsum(per_vehicle)


# Vectorized twins, used by the dwell optimizer on whole dwell vectors.


def info_values(d: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Elementwise mutual_info on arrays (no domain re-checks)."""
    s = np.sqrt(d / tau)
    one_minus_p = 0.5 * np.exp(-s)
    return (1.0 - one_minus_p) * np.log1p(-one_minus_p) - one_minus_p * (LOG2 + s) + LOG2


def info_derivs(d: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Elementwise mutual_info_deriv on arrays, with the d = 0 limit."""
    d = np.asarray(d, dtype=float)
    tau = np.broadcast_to(np.asarray(tau, dtype=float), d.shape)
    out = np.empty_like(d)
    zero = d == 0.0
    out[zero] = 0.5 / tau[zero]
    pos = ~zero
    s = np.sqrt(d[pos] / tau[pos])
    # both np.where branches evaluate, so clamp each to its stable range
    logit = np.where(
        s <= 1.0,
        np.log1p(2.0 * np.expm1(np.minimum(s, 1.0))),
        s + LOG2 + np.log1p(-0.5 * np.exp(-np.maximum(s, 1.0))),
    )
    out[pos] = np.exp(-s) / (4.0 * tau[pos] * s) * logit
    return out


@dataclass(frozen=True)
class InfoParams:
    """Discount rate and per-target sensitivities for one problem.

    ``tau[i]`` belongs to target id ``i``.  The label prior is pinned at
    one half; the closed forms above assume it.
    """

    alpha: float
    tau: tuple[float, ...]
    prior: float = 0.5

    def __post_init__(self):
        if not (self.alpha > 0.0) or not math.isfinite(self.alpha):
            raise ValueError(f"discount rate must be finite and > 0, got {self.alpha!r}")
        if len(self.tau) == 0:
            raise ValueError("need at least one sensitivity")
        if any(not (t > 0.0 and math.isfinite(t)) for t in self.tau):
            raise ValueError("all sensitivities must be finite and > 0")
        if self.prior != 0.5:
            raise ValueError("the prior is fixed at 0.5")

    @classmethod
    def uniform(cls, alpha: float, tau: float, n: int) -> "InfoParams":
        """Same sensitivity for all ``n`` targets."""
        return cls(alpha=alpha, tau=(float(tau),) * n)

    def tau_array(self) -> np.ndarray:
        return np.asarray(self.tau, dtype=float)

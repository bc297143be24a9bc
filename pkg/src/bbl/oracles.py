"""Brute-force verifiers for the belief and portfolio solvers.

These recompute objectives along deliberately independent paths: the belief
objective by naive summation over an exhaustive simplex grid (with the
general gain-loss function integrated numerically rather than in closed
form), and one-dimensional share objectives by a dense scan with a local
parabolic refinement.  Integrals on the oracle side use composite Simpson
rather than the Gauss-Legendre panels of the main path.  Desk scale only.
"""

from __future__ import annotations

import numpy as np

from .beliefs import DiscreteLottery
from .preferences import GENERAL, Preferences

__all__ = ["grid_search_beliefs", "grid_search_alpha", "simpson_integral"]

_MAX_STATES = 4
_SIMPSON_MU_NODES = 801


def simpson_integral(fn, lo: float, hi: float, n: int = 2001) -> float:
    """Composite Simpson rule on ``n`` nodes (``n`` odd, at least 3)."""
    if hi == lo:
        return 0.0
    if n < 3:
        raise ValueError(f"Simpson rule needs at least 3 nodes, got {n}")
    if n % 2 == 0:
        n += 1
    x = np.linspace(lo, hi, n)
    y = np.asarray(fn(x), dtype=float)
    h = (hi - lo) / (n - 1)
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum()))


def _oracle_gain_loss(x: np.ndarray, prefs: Preferences) -> np.ndarray:
    """Gain-loss utility recomputed without the closed-form loss branch."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    if prefs.gain_loss.kind == GENERAL:
        beta, kappa, lam = prefs.gain_loss.beta, prefs.gain_loss.kappa, prefs.lambda0

        def slope(s):
            return beta * (1.0 + (lam - 1.0) * (1.0 - np.exp(-kappa * s)))

        out[pos] = beta * x[pos]
        for i in np.nonzero(~pos)[0]:
            t = -x[i]
            # split at the end of the exp(-kappa s) boundary layer so the
            # Simpson rule stays accurate for very large kappa
            split = min(t, 30.0 / kappa)
            out[i] = -(simpson_integral(slope, 0.0, split, _SIMPSON_MU_NODES)
                       + simpson_integral(slope, split, t, _SIMPSON_MU_NODES))
    else:
        out[pos] = x[pos]
        out[~pos] = prefs.lambda0 * x[~pos]
    return out


def _simplex_grid(n_states: int, steps: int) -> np.ndarray:
    """All probability vectors with components that are multiples of 1/steps."""
    rows: list[tuple[int, ...]] = []

    def fill(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            rows.append(tuple(prefix + [remaining]))
            return
        for k in range(remaining + 1):
            fill(prefix + [k], remaining - k, slots - 1)

    fill([], steps, n_states)
    return np.array(rows, dtype=float) / steps


def grid_search_beliefs(lottery: DiscreteLottery, prefs: Preferences,
                        step: float = 0.01) -> tuple[tuple[float, ...], float]:
    """Exhaustive simplex-grid maximum of the belief objective.

    Refuses more than four states (combinatorial blowup).  Returns the best
    grid vector and its naively summed objective value.
    """
    if lottery.size > _MAX_STATES:
        raise ValueError(f"grid search refuses lotteries with more than {_MAX_STATES} states")
    if step < 0.01:
        raise ValueError(f"grid step below 0.01 is not supported, got {step}")
    u = np.array([lottery.utility.value(z) for z in lottery.payoffs])
    p = np.array(lottery.probs)
    if lottery.size == 1:
        return (1.0,), float(u[0])

    grid = _simplex_grid(lottery.size, int(round(1.0 / step)))
    expectations = grid @ u
    totals = expectations.copy()
    for s in range(lottery.size):
        totals += prefs.eta * p[s] * _oracle_gain_loss(u[s] - expectations, prefs)
    best = int(np.argmax(totals))
    return tuple(grid[best]), float(totals[best])


def grid_search_alpha(objective, bounds, n_points: int = 2001) -> tuple[float, float]:
    """Dense scan of a share objective with 3-point parabolic refinement."""
    if n_points < 2001:
        raise ValueError(f"grid scan needs at least 2001 points, got {n_points}")
    lo, hi = float(bounds[0]), float(bounds[1])
    if lo >= hi:
        raise ValueError(f"bounds must satisfy lo < hi, got {bounds}")
    xs = np.linspace(lo, hi, n_points)
    ys = np.array([objective(x) for x in xs])
    i = int(np.argmax(ys))
    best_x, best_y = float(xs[i]), float(ys[i])
    if 0 < i < n_points - 1 and np.isfinite(ys[i - 1 : i + 2]).all():
        h = xs[1] - xs[0]
        denom = ys[i - 1] - 2.0 * ys[i] + ys[i + 1]
        if denom < 0:
            x_v = xs[i] + 0.5 * h * (ys[i - 1] - ys[i + 1]) / denom
            if xs[i - 1] < x_v < xs[i + 1]:
                y_v = objective(float(x_v))
                if y_v > best_y:
                    best_x, best_y = float(x_v), float(y_v)
    return best_x, best_y

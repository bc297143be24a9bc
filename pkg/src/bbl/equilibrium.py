"""Homogeneous-investor equilibrium prices of a risky asset under a short-sale constraint.

The risk-free return and price are zero and payoffs are valued linearly, so
identical investors hold either only the risky asset or none of it, and the
price must leave them indifferent:

* naive market:          price = eta * (subjective expectation of R);
* sophisticated market:  price = eta * (E[R] + (lambda-1) * lower partial
  moment of R below the subjective expectation);
* rational market:       price = eta * E[R].

The sweep varies eta at fixed lambda so the cutoff probability runs over a
grid, producing one priced row per cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .distributions import (
    ContinuousDistribution,
    naive_value,
    partial_expectation,
    sophisticated_value,
    subjective_expectation,
)
from .preferences import Preferences, eta_for_cutoff

__all__ = [
    "EquilibriumPoint",
    "naive_price",
    "sophisticated_price",
    "sweep",
    "default_grid",
    "sweep_thresholds",
    "write_sweep_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("p_star", "eta", "pi_rational", "pi_naive", "pi_sophisticated")


@dataclass(frozen=True)
class EquilibriumPoint:
    """One row of the price sweep: cutoff, implied eta and the three prices."""

    p_star: float
    eta: float
    pi_rational: float
    pi_naive: float
    pi_sophisticated: float

    def to_dict(self) -> dict:
        return {
            "p_star": self.p_star,
            "eta": self.eta,
            "pi_rational": self.pi_rational,
            "pi_naive": self.pi_naive,
            "pi_sophisticated": self.pi_sophisticated,
        }


def naive_price(dist: ContinuousDistribution, prefs: Preferences) -> float:
    """Price leaving naive investors indifferent between the two assets."""
    return prefs.eta * naive_value(dist, prefs)


def sophisticated_price(dist: ContinuousDistribution, prefs: Preferences) -> float:
    """Price zeroing the sophisticated investor's marginal value of the risky share.

    Coincides with the sophisticated agent's per-unit value of holding the
    asset, which is what the indifference construction requires.
    """
    return sophisticated_value(dist, prefs)


def default_grid(start: float = 0.05, end: float = 0.95, step: float = 0.01) -> tuple[float, ...]:
    """Inclusive cutoff grid; the end point is kept when within half a step."""
    n = int(math.floor((end - start) / step + 0.5)) + 1
    return tuple(start + i * step for i in range(n))


def sweep(dist: ContinuousDistribution, lambda0: float,
          p_star_grid: Iterable[float] | None = None) -> list[EquilibriumPoint]:
    """Equilibrium prices across a grid of cutoffs at fixed ``lambda0``."""
    grid = tuple(p_star_grid) if p_star_grid is not None else default_grid()
    if any(not 0.0 < p < 1.0 for p in grid):
        raise ValueError("p_star grid must lie strictly inside (0, 1)")
    mean = dist.mean()
    points = []
    for p_star in sorted(grid):
        eta = eta_for_cutoff(p_star, lambda0)
        prefs = Preferences(eta=eta, lambda0=lambda0)
        points.append(EquilibriumPoint(
            p_star=p_star,
            eta=eta,
            pi_rational=eta * mean,
            pi_naive=naive_price(dist, prefs),
            pi_sophisticated=sophisticated_price(dist, prefs),
        ))
    return points


def sweep_thresholds(dist: ContinuousDistribution, lambda0: float) -> dict:
    """Diagnostic cutoffs of the sweep.

    ``negative_subjective_mean`` -- cutoff above which the subjective
    expectation itself turns negative; ``loss_moment_sign_change`` -- cutoff
    where the lower partial moment at the subjective expectation crosses
    zero, which is where the sophisticated and rational prices cross.
    """
    out = {"negative_subjective_mean": None, "loss_moment_sign_change": None}
    lo, hi = dist.support
    if lo < 0 < hi:
        out["negative_subjective_mean"] = 1.0 - dist.cdf(0.0)

    def loss_moment(p_star: float) -> float:
        return partial_expectation(dist, subjective_expectation(dist, p_star))

    a, b = 1e-6, 1.0 - 1e-6
    fa, fb = loss_moment(a), loss_moment(b)
    if fa * fb < 0:
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = loss_moment(mid)
            if fa * fm <= 0:
                b, fb = mid, fm
            else:
                a, fa = mid, fm
            if b - a <= 1e-12:
                break
        out["loss_moment_sign_change"] = 0.5 * (a + b)
    return out


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def write_sweep_csv(points: Sequence[EquilibriumPoint], stream: TextIO) -> None:
    """CSV with exactly the five declared columns, 10 significant digits."""
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for pt in points:
        row = (pt.p_star, pt.eta, pt.pi_rational, pt.pi_naive, pt.pi_sophisticated)
        stream.write(",".join(_fmt(v) for v in row) + "\n")

"""Continuous payoff distributions and the belief kernel built on them.

Supported families: a single normal, a finite mixture of normals, and a
tabulated density (linearly interpolated between grid points).  Unbounded
families are truncated at an eight-standard-deviation envelope per
component; the discarded tail mass is below 1e-15.

The two quantities everything else is assembled from are

* ``subjective_expectation(dist, p_star)`` -- the point with upper-tail
  mass ``p_star``, which is the optimal subjective expectation of an agent
  with that cutoff, and
* ``partial_expectation(dist, a)`` -- the lower partial moment
  ``integral of z * f(z) below a``.

Integrals run on fixed-order Gauss-Legendre panels; the normal closed form
of the partial expectation is exposed separately so the two paths can be
cross-checked.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .preferences import Preferences, cutoff_probability

__all__ = [
    "QuadratureConfig",
    "NormalComponent",
    "ContinuousDistribution",
    "ComparisonResult",
    "subjective_expectation",
    "partial_expectation",
    "partial_expectation_closed_form",
    "naive_value",
    "sophisticated_value",
    "compare",
    "PREFER_A",
    "PREFER_B",
    "INDIFFERENT",
]

PREFER_A = "prefer_a"
PREFER_B = "prefer_b"
INDIFFERENT = "indifferent"

_SUPPORT_SIGMAS = 8.0
_BISECT_MAX_ITER = 200
_BISECT_X_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureConfig:
    """Fixed-order Gauss-Legendre panel rule."""

    order: int = 20
    panels: int = 64
    abs_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.order < 2 or self.panels < 1:
            raise ValueError("quadrature needs order >= 2 and panels >= 1")
        if self.abs_tol <= 0:
            raise ValueError("quadrature abs_tol must be positive")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=8)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for the panels delimited by ``edges``."""
    base_x, base_w = _leggauss(order)
    lo = edges[:-1][:, None]
    hi = edges[1:][:, None]
    half = 0.5 * (hi - lo)
    x = (lo + half) + half * base_x[None, :]
    w = half * base_w[None, :]
    return x.ravel(), w.ravel()


def _norm_pdf(z: np.ndarray | float, mean: float, sd: float):
    t = (z - mean) / sd
    return np.exp(-0.5 * t * t) / (sd * math.sqrt(2.0 * math.pi))


def _norm_cdf(z: float, mean: float, sd: float) -> float:
    return 0.5 * (1.0 + math.erf((z - mean) / (sd * math.sqrt(2.0))))


@dataclass(frozen=True)
class NormalComponent:
    weight: float
    mean: float
    sd: float

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError(f"mixture weight must be positive, got {self.weight}")
        if self.sd <= 0:
            raise ValueError(f"sd must be positive, got {self.sd}")


@dataclass(frozen=True)
class ContinuousDistribution:
    """Immutable density over an effective support interval."""

    kind: str
    components: tuple[NormalComponent, ...] = ()
    grid: tuple[float, ...] = ()
    density: tuple[float, ...] = ()
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        if self.kind not in ("normal", "mixture", "tabulated"):
            raise ValueError(f"distribution kind must be 'normal', 'mixture' or 'tabulated', got {self.kind!r}")
        if self.kind in ("normal", "mixture"):
            if not self.components:
                raise ValueError("distribution: missing normal components")
            total = math.fsum(c.weight for c in self.components)
            if abs(total - 1.0) > 1e-10:
                raise ValueError(f"mixture weights must sum to 1, got {total}")
        else:
            z = tuple(float(v) for v in self.grid)
            f = tuple(float(v) for v in self.density)
            if len(z) != len(f):
                raise ValueError("tabulated: fields 'z' and 'f' must have equal length")
            if len(z) < 2:
                raise ValueError("tabulated: need at least two grid points")
            if any(b <= a for a, b in zip(z, z[1:])):
                raise ValueError("tabulated: field 'z' must be strictly increasing")
            if any(v < 0 for v in f):
                raise ValueError("tabulated: density must be nonnegative")
            object.__setattr__(self, "grid", z)
            object.__setattr__(self, "density", f)
            total = math.fsum((f[i] + f[i + 1]) * (z[i + 1] - z[i]) * 0.5 for i in range(len(z) - 1))
            tol = max(self.quadrature.abs_tol, 1e-8)
            if abs(total - 1.0) > tol:
                raise ValueError(f"tabulated: density must integrate to 1 within {tol}, got {total}")

    # ---- constructors -------------------------------------------------

    @classmethod
    def normal(cls, mean: float, sd: float,
               quadrature: QuadratureConfig = DEFAULT_QUADRATURE) -> "ContinuousDistribution":
        return cls("normal", components=(NormalComponent(1.0, float(mean), float(sd)),),
                   quadrature=quadrature)

    @classmethod
    def mixture(cls, components,
                quadrature: QuadratureConfig = DEFAULT_QUADRATURE) -> "ContinuousDistribution":
        comps = tuple(
            c if isinstance(c, NormalComponent) else NormalComponent(float(c[0]), float(c[1]), float(c[2]))
            for c in components
        )
        return cls("mixture", components=comps, quadrature=quadrature)

    @classmethod
    def tabulated(cls, z, f,
                  quadrature: QuadratureConfig = DEFAULT_QUADRATURE) -> "ContinuousDistribution":
        return cls("tabulated", grid=tuple(z), density=tuple(f), quadrature=quadrature)

    # ---- basic functionals --------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "tabulated":
            return self.grid[0], self.grid[-1]
        lo = min(c.mean - _SUPPORT_SIGMAS * c.sd for c in self.components)
        hi = max(c.mean + _SUPPORT_SIGMAS * c.sd for c in self.components)
        return lo, hi

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "tabulated":
            out = np.interp(z, self.grid, self.density, left=0.0, right=0.0)
        else:
            out = sum(c.weight * _norm_pdf(z, c.mean, c.sd) for c in self.components)
        return float(out) if np.isscalar(z) or z.ndim == 0 else out

    def cdf(self, z: float) -> float:
        if self.kind == "tabulated":
            grid, dens = self.grid, self.density
            if z <= grid[0]:
                return 0.0
            if z >= grid[-1]:
                return 1.0
            i = bisect_right(grid, z) - 1
            acc = math.fsum((dens[k] + dens[k + 1]) * (grid[k + 1] - grid[k]) * 0.5 for k in range(i))
            fz = self.pdf(z)
            return acc + (dens[i] + fz) * (z - grid[i]) * 0.5
        return sum(c.weight * _norm_cdf(z, c.mean, c.sd) for c in self.components)

    def mean(self) -> float:
        if self.kind == "tabulated":
            lo, hi = self.support
            return partial_expectation(self, hi)
        return math.fsum(c.weight * c.mean for c in self.components)

    def quantile(self, p: float) -> float:
        """Point z with cdf(z) = p, by bisection on the effective support."""
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile defined only for probabilities in (0, 1), got {p}")
        lo, hi = self.support
        for _ in range(_BISECT_MAX_ITER):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < p:
                lo = mid
            else:
                hi = mid
            if hi - lo <= _BISECT_X_TOL:
                break
        return 0.5 * (lo + hi)

    # ---- quadrature ----------------------------------------------------

    def _panel_edges(self, lo: float, hi: float) -> np.ndarray:
        if self.kind == "tabulated":
            inner = [z for z in self.grid if lo < z < hi]
            return np.array([lo, *inner, hi])
        return np.linspace(lo, hi, self.quadrature.panels + 1)

    def quad_nodes(self, lo: float | None = None, hi: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``x`` and weights ``w`` with the density folded in, so that
        ``integral of f(z) g(z) over [lo, hi]`` is approximated by ``w @ g(x)``."""
        s_lo, s_hi = self.support
        lo = s_lo if lo is None else max(lo, s_lo)
        hi = s_hi if hi is None else min(hi, s_hi)
        if hi <= lo:
            return np.empty(0), np.empty(0)
        x, w = _panel_nodes(self._panel_edges(lo, hi), self.quadrature.order)
        return x, w * self.pdf(x)

    def expect(self, fn, lo: float | None = None, hi: float | None = None) -> float:
        """Quadrature value of ``integral f(z) fn(z) dz`` over ``[lo, hi]``."""
        x, w = self.quad_nodes(lo, hi)
        if x.size == 0:
            return 0.0
        return float(w @ np.asarray(fn(x), dtype=float))

    # ---- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == "normal":
            c = self.components[0]
            return {"normal": {"mean": c.mean, "sd": c.sd}}
        if self.kind == "mixture":
            return {"mixture": [{"w": c.weight, "mean": c.mean, "sd": c.sd} for c in self.components]}
        return {"tabulated": {"z": list(self.grid), "f": list(self.density)}}

    @classmethod
    def from_dict(cls, obj: dict,
                  quadrature: QuadratureConfig = DEFAULT_QUADRATURE) -> "ContinuousDistribution":
        if not isinstance(obj, dict):
            raise ValueError("distribution: expected a JSON object")
        if "normal" in obj:
            spec = obj["normal"]
            for key in ("mean", "sd"):
                if key not in spec:
                    raise ValueError(f"distribution.normal: missing field {key!r}")
            return cls.normal(spec["mean"], spec["sd"], quadrature)
        if "mixture" in obj:
            comps = []
            for i, spec in enumerate(obj["mixture"]):
                for key in ("w", "mean", "sd"):
                    if key not in spec:
                        raise ValueError(f"distribution.mixture[{i}]: missing field {key!r}")
                comps.append((spec["w"], spec["mean"], spec["sd"]))
            return cls.mixture(comps, quadrature)
        if "tabulated" in obj:
            spec = obj["tabulated"]
            for key in ("z", "f"):
                if key not in spec:
                    raise ValueError(f"distribution.tabulated: missing field {key!r}")
            return cls.tabulated(spec["z"], spec["f"], quadrature)
        raise ValueError("distribution: expected one of the fields 'normal', 'mixture', 'tabulated'")


def subjective_expectation(dist: ContinuousDistribution, p_star: float) -> float:
    """The point with upper-tail mass ``p_star``.

    This is where an agent with cutoff ``p_star`` settles her expectation:
    exactly a ``p_star`` chance of doing at least as well as anticipated.
    """
    if not 0.0 < p_star < 1.0:
        raise DomainError(
            f"subjective expectation is unbounded for cutoff {p_star}; need 0 < p_star < 1"
        )
    return dist.quantile(1.0 - p_star)


def partial_expectation(dist: ContinuousDistribution, a: float) -> float:
    """Lower partial moment: quadrature of ``z f(z)`` below ``a``."""
    if not math.isfinite(a):
        raise ValueError(f"partial expectation needs a finite bound, got {a}")
    lo, hi = dist.support
    return dist.expect(lambda z: z, lo, min(a, hi))


def partial_expectation_closed_form(dist: ContinuousDistribution, a: float) -> float:
    """Closed-form lower partial moment for normal and mixture kinds."""
    if dist.kind == "tabulated":
        raise ValueError("closed-form partial expectation requires a normal or mixture kind")
    acc = 0.0
    for c in dist.components:
        t = (a - c.mean) / c.sd
        acc += c.weight * (c.mean * _norm_cdf(t, 0.0, 1.0) - c.sd * _norm_pdf(t, 0.0, 1.0))
    return acc


def _require_linear_gain_loss(prefs: Preferences) -> None:
    if prefs.gain_loss.kind != "linear":
        raise ValueError("continuous belief kernel requires the linear gain-loss kind")


def naive_value(dist: ContinuousDistribution, prefs: Preferences) -> float:
    """Ranking statistic of an agent who acts on her biased expectation alone.

    Payoffs are valued linearly, so this is just the subjective expectation
    at the agent's cutoff.
    """
    _require_linear_gain_loss(prefs)
    return subjective_expectation(dist, cutoff_probability(prefs))


def sophisticated_value(dist: ContinuousDistribution, prefs: Preferences) -> float:
    """Full objective of an agent who internalizes her own bias.

    At optimal beliefs the anticipation and reference-point effects offset,
    leaving the objective mean plus an extra ``(lambda-1)`` weighting of the
    loss region below the subjective expectation (payoffs valued linearly).
    """
    _require_linear_gain_loss(prefs)
    p_star = cutoff_probability(prefs)
    a = subjective_expectation(dist, p_star)
    return prefs.eta * (dist.mean() + (prefs.lambda0 - 1.0) * partial_expectation(dist, a))


@dataclass(frozen=True)
class ComparisonResult:
    value_a: float
    value_b: float
    verdict: str
    tolerance: float

    def to_dict(self) -> dict:
        return {"value_a": self.value_a, "value_b": self.value_b, "verdict": self.verdict}


def compare(dist_a: ContinuousDistribution, dist_b: ContinuousDistribution,
            prefs: Preferences, agent_kind: str, tolerance: float = 1e-10) -> ComparisonResult:
    """Rank two lotteries for a naive or sophisticated agent."""
    if agent_kind == "naive":
        va, vb = naive_value(dist_a, prefs), naive_value(dist_b, prefs)
    elif agent_kind == "sophisticated":
        va, vb = sophisticated_value(dist_a, prefs), sophisticated_value(dist_b, prefs)
    else:
        raise ValueError(f"agent_kind must be 'naive' or 'sophisticated', got {agent_kind!r}")
    diff = va - vb
    if abs(diff) <= tolerance:
        verdict = INDIFFERENT
    else:
        verdict = PREFER_A if diff > 0 else PREFER_B
    return ComparisonResult(value_a=va, value_b=vb, verdict=verdict, tolerance=tolerance)

"""Command-line front end: parse inputs, dispatch to the solvers, emit JSON/CSV.

Exit codes: 0 on success, 1 on an input error, 2 on a numerical failure
(non-convergence or a failed oracle verification).  Numbers are printed at
10 significant digits so identical inputs give byte-identical output.
The ``BBL_QUAD_TOL`` environment variable overrides the quadrature
tolerance used when distributions are built from JSON.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

import numpy as np

from . import equilibrium as eq
from .beliefs import ConsumptionUtility, DiscreteLottery, solve_optimal_beliefs
from .distributions import DEFAULT_QUADRATURE, ContinuousDistribution, QuadratureConfig, compare
from .errors import ConvergenceError
from .oracles import grid_search_alpha, grid_search_beliefs
from .portfolio import (
    Asset,
    naive_alpha,
    naive_fixed_objective,
    rational_alpha,
    rational_objective,
    sophisticated_alpha,
    sophisticated_objective,
)
from .preferences import Preferences, cutoff_probability, eta_for_cutoff
from .timing import timing_preference

__all__ = ["run", "main"]


class _CliArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI reserves 2 for
    # numerical failure, so argument problems are rethrown and mapped to 1.
    def error(self, message):
        raise _CliArgumentError(message)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _round10(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round10(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round10(v) for v in obj]
    return obj


def _load_json(name: str, text: str):
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ValueError(f"argument {name}: invalid JSON: {e}") from e
    try:
        with open(text, "r", encoding="utf-8") as fh:
            body = fh.read()
    except OSError as e:
        raise ValueError(f"argument {name}: cannot read file {text!r}: {e}") from e
    try:
        return json.loads(body)
    except json.JSONDecodeError as e:
        raise ValueError(f"argument {name}: invalid JSON in file {text!r}: {e}") from e


def _parse_triplet(name: str, text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"argument {name}: expected start:end:step, got {text!r}")
    try:
        start, end, step = (float(v) for v in parts)
    except ValueError as e:
        raise ValueError(f"argument {name}: expected numeric start:end:step, got {text!r}") from e
    if step <= 0 or end < start:
        raise ValueError(f"argument {name}: need start <= end and step > 0, got {text!r}")
    return start, end, step


def _parse_bounds(name: str, text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"argument {name}: expected lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as e:
        raise ValueError(f"argument {name}: expected numeric lo:hi, got {text!r}") from e
    return lo, hi


def _grid_values(start: float, end: float, step: float) -> tuple[float, ...]:
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > end + 0.5 * step:
            break
        values.append(v)
        k += 1
    return tuple(values)


def _quadrature_from_env() -> QuadratureConfig:
    raw = os.environ.get("BBL_QUAD_TOL")
    if raw is None:
        return DEFAULT_QUADRATURE
    try:
        tol = float(raw)
    except ValueError as e:
        raise ValueError(f"BBL_QUAD_TOL: expected a number, got {raw!r}") from e
    return QuadratureConfig(abs_tol=tol)


def _emit_text(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(obj, output: str | None) -> None:
    _emit_text(json.dumps(_round10(obj), indent=2) + "\n", output)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bbl", description="Optimal biased beliefs: solvers and pricing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pstar", help="cutoff probability or its inverse")
    p.add_argument("--eta", type=float)
    p.add_argument("--lambda", dest="lambda0", type=float, required=True)
    p.add_argument("--p-star", dest="p_star", type=float)
    p.add_argument("--output", "-o")

    p = sub.add_parser("beliefs", help="solve for optimal subjective beliefs")
    p.add_argument("--lottery", required=True)
    p.add_argument("--prefs", required=True)
    p.add_argument("--output", "-o")

    p = sub.add_parser("timing", help="early-versus-wait information verdict")
    p.add_argument("--lottery", required=True)
    p.add_argument("--prefs", required=True)
    p.add_argument("--output", "-o")

    p = sub.add_parser("compare", help="rank two continuous lotteries")
    p.add_argument("--dist-a", required=True)
    p.add_argument("--dist-b", required=True)
    p.add_argument("--prefs", required=True)
    p.add_argument("--agent", choices=["naive", "sophisticated"], required=True)
    p.add_argument("--output", "-o")

    p = sub.add_parser("portfolio", help="solve the risky-share problem")
    p.add_argument("--asset", required=True)
    p.add_argument("--agent", choices=["rational", "naive", "sophisticated"], required=True)
    p.add_argument("--prefs")
    p.add_argument("--utility")
    p.add_argument("--bounds", default="-10:10")
    p.add_argument("--output", "-o")

    p = sub.add_parser("equilibrium", help="price sweep over the cutoff grid")
    p.add_argument("--dist", required=True)
    p.add_argument("--lambda", dest="lambda0", type=float, required=True)
    p.add_argument("--grid", default="0.05:0.95:0.01")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", "-o")

    p = sub.add_parser("verify", help="rerun a solver against its brute-force oracle")
    p.add_argument("target", choices=["beliefs", "alpha"])
    p.add_argument("--lottery")
    p.add_argument("--prefs")
    p.add_argument("--step", type=float, default=0.02)
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--asset")
    p.add_argument("--agent", choices=["rational", "naive", "sophisticated"], default="rational")
    p.add_argument("--utility")
    p.add_argument("--bounds", default="-10:10")
    p.add_argument("--n", type=int, default=2001)
    p.add_argument("--output", "-o")
    return parser


def _cmd_pstar(args) -> int:
    if args.p_star is not None:
        value = eta_for_cutoff(args.p_star, args.lambda0)
    else:
        if args.eta is None:
            raise ValueError("pstar: provide --eta (forward) or --p-star (inverse)")
        value = cutoff_probability(Preferences(eta=args.eta, lambda0=args.lambda0))
    _emit_text(_fmt(value) + "\n", args.output)
    return 0


def _cmd_beliefs(args) -> int:
    lottery = DiscreteLottery.from_dict(_load_json("--lottery", args.lottery))
    prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
    _emit_json(solve_optimal_beliefs(lottery, prefs).to_dict(), args.output)
    return 0


def _cmd_timing(args) -> int:
    lottery = DiscreteLottery.from_dict(_load_json("--lottery", args.lottery))
    prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
    _emit_json(timing_preference(lottery, prefs).to_dict(), args.output)
    return 0


def _cmd_compare(args) -> int:
    quad = _quadrature_from_env()
    dist_a = ContinuousDistribution.from_dict(_load_json("--dist-a", args.dist_a), quad)
    dist_b = ContinuousDistribution.from_dict(_load_json("--dist-b", args.dist_b), quad)
    prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
    _emit_json(compare(dist_a, dist_b, prefs, args.agent).to_dict(), args.output)
    return 0


def _portfolio_inputs(args):
    quad = _quadrature_from_env()
    obj = _load_json("--asset", args.asset)
    if not isinstance(obj, dict) or "excess" not in obj:
        raise ValueError("asset: missing field 'excess'")
    asset = Asset(float(obj.get("r_f", 0.0)),
                  ContinuousDistribution.from_dict(obj["excess"], quad))
    utility = (ConsumptionUtility.from_dict(_load_json("--utility", args.utility))
               if args.utility else ConsumptionUtility())
    bounds = _parse_bounds("--bounds", args.bounds)
    return asset, utility, bounds


def _cmd_portfolio(args) -> int:
    asset, utility, bounds = _portfolio_inputs(args)
    if args.agent == "rational":
        solution = rational_alpha(asset, utility, bounds)
    else:
        if args.prefs is None:
            raise ValueError(f"portfolio: agent {args.agent!r} requires --prefs")
        prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
        solve = naive_alpha if args.agent == "naive" else sophisticated_alpha
        solution = solve(asset, prefs, utility, bounds)
    _emit_json(solution.to_dict(), args.output)
    return 0 if solution.converged else 2


def _cmd_equilibrium(args) -> int:
    quad = _quadrature_from_env()
    dist = ContinuousDistribution.from_dict(_load_json("--dist", args.dist), quad)
    start, end, step = _parse_triplet("--grid", args.grid)
    points = eq.sweep(dist, args.lambda0, _grid_values(start, end, step))
    if args.format == "csv":
        buf = io.StringIO()
        eq.write_sweep_csv(points, buf)
        _emit_text(buf.getvalue(), args.output)
    else:
        _emit_json([pt.to_dict() for pt in points], args.output)
    return 0


def _random_lottery(rng: np.random.Generator) -> DiscreteLottery:
    size = int(rng.integers(2, 5))
    payoffs = np.sort(rng.uniform(0.0, 10.0, size))
    probs = rng.dirichlet(np.ones(size))
    probs = probs / probs.sum()
    return DiscreteLottery(tuple(payoffs), tuple(probs))


def _random_prefs(rng: np.random.Generator) -> Preferences:
    eta = rng.uniform(0.3, 1.0)
    lam = rng.uniform(max(1.02, 1.0 / eta), 4.0)
    return Preferences(eta=eta, lambda0=lam)


def _cmd_verify(args) -> int:
    if args.target == "beliefs":
        if args.random > 0:
            rng = np.random.default_rng(args.seed)
            failures = 0
            worst = 0.0
            for _ in range(args.random):
                lottery = _random_lottery(rng)
                prefs = _random_prefs(rng)
                solution = solve_optimal_beliefs(lottery, prefs)
                _, oracle_value = grid_search_beliefs(lottery, prefs, args.step)
                gap = oracle_value - solution.total_utility
                worst = max(worst, gap)
                if gap > 1e-12:
                    failures += 1
            _emit_json({"cases": args.random, "failures": failures, "max_gap": worst},
                       args.output)
            return 0 if failures == 0 else 2
        if args.lottery is None or args.prefs is None:
            raise ValueError("verify beliefs: provide --lottery and --prefs, or --random N")
        lottery = DiscreteLottery.from_dict(_load_json("--lottery", args.lottery))
        prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
        q, value = grid_search_beliefs(lottery, prefs, args.step)
        _emit_json({"q": list(q), "utility": value}, args.output)
        return 0

    if args.asset is None:
        raise ValueError("verify alpha: provide --asset")
    asset, utility, bounds = _portfolio_inputs(args)
    if args.agent == "rational":
        objective = rational_objective(asset, utility)
    else:
        if args.prefs is None:
            raise ValueError(f"verify alpha: agent {args.agent!r} requires --prefs")
        prefs = Preferences.from_dict(_load_json("--prefs", args.prefs))
        if args.agent == "sophisticated":
            objective = sophisticated_objective(asset, prefs, utility)
        else:
            solution = naive_alpha(asset, prefs, utility, bounds)
            objective = naive_fixed_objective(asset, prefs, utility, solution.alpha)
    alpha, value = grid_search_alpha(objective, bounds, args.n)
    _emit_json({"alpha": alpha, "value": value}, args.output)
    return 0


_COMMANDS = {
    "pstar": _cmd_pstar,
    "beliefs": _cmd_beliefs,
    "timing": _cmd_timing,
    "compare": _cmd_compare,
    "portfolio": _cmd_portfolio,
    "equilibrium": _cmd_equilibrium,
    "verify": _cmd_verify,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliArgumentError as e:
        print(f"bbl: error: {e}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except ConvergenceError as e:
        print(f"bbl: numerical failure: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"bbl: error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

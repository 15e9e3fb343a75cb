"""Command-line front end.

Every subcommand builds an effective run configuration (defaults, then
config-file values, then explicit flags), writes its result files plus a
`<command>_config.json` sidecar that reproduces the run byte for byte, and
exits with 0 on success, 2 on usage errors, 3 on runtime or I/O failures and
4 when an estimate could not be produced.

The --threads flag only controls worker scheduling; it is deliberately left
out of the sidecar because outputs do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Dict, List, Optional

from . import cluster, estimators, exports, search
from .environment import DistributionError, Environment, parse_distribution
from .estimators import EstimationError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3
EXIT_ESTIMATION = 4

FIG_LAW = '{"kind": "shifted_bernoulli", "a": 1, "b": 1, "p": 0.05}'
INF_LAW = (
    '{"kind": "with_infinity", "p_inf": 0.5, '
    '"base": {"kind": "shifted_bernoulli", "a": 1, "b": 1, "p": 0.05}}'
)


class UsageError(ValueError):
    pass


def _parse_int_list(s: str) -> List[int]:
    try:
        return [int(tok) for tok in s.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {s!r}") from exc


def _parse_float_list(s: str) -> List[float]:
    try:
        return [float(tok) for tok in s.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated number list, got {s!r}") from exc


# Per-command defaults; config file and flags override in that order.
DEFAULTS: Dict[str, Dict[str, object]] = {
    "ball": {"seed": 1, "dim": 2, "dist": FIG_LAW, "t": 60.0, "budget": 10_000_000},
    "time-constant": {
        "seed": 1,
        "dim": 2,
        "dist": FIG_LAW,
        "x": "1,0",
        "n_grid": "16,32,64,128",
        "replicas": 16,
        "budget": 1_000_000,
    },
    "regimes": {
        "seed": 1,
        "dim": 2,
        "betas": "0.5,1,2",
        "n_grid": "16,32,64,128,256",
        "replicas": 20,
        "budget": 30_000_000,
        "margin_factor": 0.5,
    },
    "sandwich": {
        "seed": 1,
        "dim": 2,
        "beta": 1.0,
        "n": 32,
        "replicas": 50,
        "margin_factor": 0.5,
    },
    "shape": {
        "seed": 1,
        "dim": 2,
        "dist": FIG_LAW,
        "t": 100.0,
        "eps": 0.25,
        "seeds": 5,
        "budget": 10_000_000,
    },
    "infinite": {
        "seed": 1,
        "dim": 2,
        "dist": INF_LAW,
        "n": 64,
        "replicas": 20,
        "tol": 0.15,
        "tilde_m": "1.5",
        "budget": 1_000_000,
    },
    "mn": {"seed": 1, "beta": 1.0, "n_list": "1,10,100,1000,10000", "replicas": 100_000},
    "chemical": {
        "seed": 1,
        "dim": 2,
        "dist": INF_LAW,
        "m": "inf",
        "x": "10,10",
        "replicas": 200,
        "budget": 1_000_000,
    },
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="linefpp",
        description="Simulators and estimators for lattice percolation with shared line passage times.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with flag values (flags override it)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--dim", type=int)
        sp.add_argument("--dist", help="distribution spec as JSON")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--budget", type=int)
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("ball", help="grow B_t and export CSV + PGM raster")
    common(sp)
    sp.add_argument("--t", type=float)

    sp = sub.add_parser("time-constant", help="estimate T(0, n x)/n over an n-grid")
    common(sp)
    sp.add_argument("--x")
    sp.add_argument("--n-grid", dest="n_grid")
    sp.add_argument("--replicas", type=int)

    sp = sub.add_parser("regimes", help="classify E[T(0,n e1)] growth for power laws")
    common(sp)
    sp.add_argument("--betas")
    sp.add_argument("--n-grid", dest="n_grid")
    sp.add_argument("--replicas", type=int)
    sp.add_argument("--margin-factor", dest="margin_factor", type=float)

    sp = sub.add_parser("sandwich", help="analytic bracket vs Monte Carlo mean")
    common(sp)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--replicas", type=int)
    sp.add_argument("--margin-factor", dest="margin_factor", type=float)

    sp = sub.add_parser("shape", help="diamond inclusion checks for B_t")
    common(sp)
    sp.add_argument("--t", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--seeds", type=int)

    sp = sub.add_parser("infinite", help="regularized time statistics with infinite lines")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--replicas", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--tilde-m", dest="tilde_m", help="comma-separated finite thresholds")

    sp = sub.add_parser("mn", help="order-statistic means: Monte Carlo, exact, asymptote")
    common(sp)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--n-list", dest="n_list")
    sp.add_argument("--replicas", type=int)

    sp = sub.add_parser("chemical", help="chemical distance tail statistics")
    common(sp)
    sp.add_argument("--m", help="cluster threshold (number or 'inf')")
    sp.add_argument("--x")
    sp.add_argument("--replicas", type=int)

    return p


def effective_config(args: argparse.Namespace) -> Dict[str, object]:
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        with open(args.config) as fh:
            try:
                file_cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"malformed config file {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _write_sidecar(outdir: str, cfg: Dict[str, object]) -> None:
    name = cfg["command"].replace("-", "_") + "_config.json"
    exports.write_json(os.path.join(outdir, name), cfg)


def cmd_ball(cfg, outdir, threads):
    env = Environment(int(cfg["seed"]), parse_distribution(cfg["dist"]), int(cfg["dim"]))
    t = float(cfg["t"])
    if t < 0:
        raise UsageError("--t must be nonnegative")
    ball = search.grow_ball(env, t, int(cfg["budget"]))
    exports.write_points_csv(os.path.join(outdir, "ball_points.csv"), ball.points)
    if env.d == 2:
        rows = exports.ball_raster_rows(ball.points, ball.bbox)
        exports.write_pgm(
            os.path.join(outdir, "ball.pgm"),
            rows,
            f"ball t={t} bbox={ball.bbox[0]}..{ball.bbox[1]} rows top to bottom",
        )
    exports.write_json(
        os.path.join(outdir, "ball.json"),
        {
            "t": t,
            "points": len(ball.points),
            "bbox": [list(ball.bbox[0]), list(ball.bbox[1])],
            "status": ball.status,
            "expanded": ball.expanded,
        },
    )


def cmd_time_constant(cfg, outdir, threads):
    dist = parse_distribution(cfg["dist"])
    d = int(cfg["dim"])
    x = tuple(_parse_int_list(cfg["x"]))
    if len(x) != d:
        raise UsageError(f"--x must have {d} coordinates")
    n_grid = _parse_int_list(str(cfg["n_grid"]))
    replicas = int(cfg["replicas"])
    records = []
    rows = []
    for n in n_grid:
        summ = estimators.estimate_point_time(
            dist, d, x, n, replicas, int(cfg["budget"]), int(cfg["seed"]), threads
        )
        records.append(
            {
                "estimator": "time_constant",
                "n": n,
                "mean": summ.mean,
                "stderr": summ.stderr,
                "ci95": list(summ.ci95),
                "replicas": summ.replicas,
                "truncated_count": summ.truncated_count,
            }
        )
        rows += [(n, i, v) for i, v in enumerate(summ.values)]
    exports.write_json(os.path.join(outdir, "time_constant.json"), records)
    exports.write_csv(
        os.path.join(outdir, "time_constant_replicas.csv"), ["n", "replica", "value"], rows
    )


def cmd_regimes(cfg, outdir, threads):
    betas = _parse_float_list(str(cfg["betas"]))
    if any(b <= 0 for b in betas):
        raise UsageError("beta values must be positive")
    n_grid = _parse_int_list(str(cfg["n_grid"]))
    out = []
    for beta in betas:
        rep = estimators.classify_regime(
            beta,
            n_grid,
            int(cfg["replicas"]),
            int(cfg["seed"]),
            float(cfg["margin_factor"]),
            int(cfg["budget"]),
            threads,
        )
        out.append(
            {
                "beta": beta,
                "model": rep.model,
                "exponent": rep.exponent,
                "residual": rep.residual,
                "n_grid": rep.n_grid,
                "means": rep.means,
                "stderrs": rep.stderrs,
                "doubling_ratios": rep.doubling_ratios,
                "growth_ratio": rep.growth_ratio,
                "replicas": rep.replicas,
                "truncated_count": rep.truncated_count,
            }
        )
    exports.write_json(os.path.join(outdir, "regimes.json"), out)


def cmd_sandwich(cfg, outdir, threads):
    beta = float(cfg["beta"])
    if beta <= 0:
        raise UsageError("--beta must be positive")
    rep = estimators.sandwich_report(
        beta,
        int(cfg["n"]),
        int(cfg["replicas"]),
        int(cfg["seed"]),
        float(cfg["margin_factor"]),
        threads,
    )
    exports.write_json(os.path.join(outdir, "sandwich.json"), rep)


def cmd_shape(cfg, outdir, threads):
    dist = parse_distribution(cfg["dist"])
    eps = float(cfg["eps"])
    t = float(cfg["t"])
    rows = []
    for i in range(int(cfg["seeds"])):
        env = estimators.replica_environment(int(cfg["seed"]), dist, int(cfg["dim"]), i)
        sm = estimators.shape_metrics(env, t, eps, int(cfg["budget"]))
        rows.append((i, int(sm.outer_ok), sm.inner_fraction, sm.ball_size, sm.status))
    exports.write_csv(
        os.path.join(outdir, "shape.csv"),
        ["seed_index", "outer_ok", "inner_fraction", "ball_size", "status"],
        rows,
    )
    exports.write_json(
        os.path.join(outdir, "shape.json"),
        {
            "t": t,
            "eps": eps,
            "seeds": int(cfg["seeds"]),
            "outer_ok_count": sum(r[1] for r in rows),
            "inner_full_count": sum(1 for r in rows if r[2] == 1.0),
        },
    )


def cmd_infinite(cfg, outdir, threads):
    dist = parse_distribution(cfg["dist"])
    thresholds = _parse_float_list(str(cfg["tilde_m"])) if cfg["tilde_m"] else []
    rep = estimators.infinite_stats(
        dist,
        int(cfg["n"]),
        int(cfg["replicas"]),
        int(cfg["seed"]),
        float(cfg["tol"]),
        thresholds,
        int(cfg["budget"]),
        threads,
    )
    exports.write_json(
        os.path.join(outdir, "infinite.json"),
        {
            "n": rep.n,
            "a": rep.a,
            "tol": rep.tol,
            "deviation_rate": rep.deviation_rate,
            "t_star_mean": rep.t_star_summary.mean,
            "t_star_stderr": rep.t_star_summary.stderr,
            "replicas": rep.t_star_summary.replicas,
            "tilde_means": {str(M): s.mean for M, s in rep.tilde_means.items()},
            "tilde_stderrs": {str(M): s.stderr for M, s in rep.tilde_means.items()},
            "pooled_gap_sigmas": rep.pooled_gap_sigmas,
        },
    )
    exports.write_csv(
        os.path.join(outdir, "infinite_replicas.csv"),
        ["replica", "t_star_over_n"],
        list(enumerate(rep.t_star_summary.values)),
    )


def cmd_mn(cfg, outdir, threads):
    beta = float(cfg["beta"])
    if beta <= 0:
        raise UsageError("--beta must be positive")
    from .environment import Power

    rows = []
    for n in _parse_int_list(str(cfg["n_list"])):
        mc = estimators.mn_monte_carlo(Power(beta, 1.0), n, int(cfg["replicas"]), int(cfg["seed"]))
        exact = estimators.mn_mean_power(beta, n)
        asym = estimators.mn_asymptote(beta, 1.0, n)
        uniform_exact = estimators.mn_mean_exact_uniform(n) if beta == 1.0 else ""
        rows.append((n, mc.mean, mc.stderr, exact, asym, uniform_exact))
    exports.write_csv(
        os.path.join(outdir, "mn.csv"),
        ["n", "mc_mean", "mc_stderr", "exact_quadrature", "asymptote", "uniform_closed_form"],
        rows,
    )


def cmd_chemical(cfg, outdir, threads):
    dist = parse_distribution(cfg["dist"])
    M = math.inf if str(cfg["m"]).lower() in ("inf", "infinity") else float(cfg["m"])
    x = tuple(_parse_int_list(cfg["x"]))
    rep = estimators.chemical_stats(
        dist, M, x, int(cfg["replicas"]), int(cfg["seed"]), int(cfg["budget"]), threads
    )
    exports.write_json(
        os.path.join(outdir, "chemical.json"),
        {
            "x": list(rep.x),
            "p_m": rep.p_m,
            "replicas": rep.replicas,
            "threshold_hops": rep.threshold_hops,
            "exceed_rate": rep.exceed_rate,
            "min_ratio": rep.min_ratio,
        },
    )
    exports.write_csv(
        os.path.join(outdir, "chemical_replicas.csv"),
        ["replica", "hops"],
        list(enumerate(rep.hops)),
    )


HANDLERS = {
    "ball": cmd_ball,
    "time-constant": cmd_time_constant,
    "regimes": cmd_regimes,
    "sandwich": cmd_sandwich,
    "shape": cmd_shape,
    "infinite": cmd_infinite,
    "mn": cmd_mn,
    "chemical": cmd_chemical,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        cfg = effective_config(args)
        outdir = args.out
        os.makedirs(outdir, exist_ok=True)
        threads = max(1, int(args.threads or 1))
        HANDLERS[args.command](cfg, outdir, threads)
        _write_sidecar(outdir, cfg)
    except (EstimationError, cluster.ClusterError) as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except (UsageError, DistributionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

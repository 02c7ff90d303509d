"""Command-line front end.

Subcommands:

* ``evolve``         one trajectory, CSV rows to --out
* ``sweep``          Cartesian (n, m-fraction) grid, CSV + summary CSV
* ``validate-kraus`` completeness defects and Choi-state distances of the
                     three Kraus constructions at one parameter point
* ``oracle-check``   channel-vs-integrator trace distance over the
                     verification grid; nonzero exit if any point exceeds
                     the tolerance

Exit codes: 0 success, 1 validation or check failure, 2 usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .channels import (
    CHOI_DERIVED,
    apply_local_channels,
    choi_of_kraus,
    kraus_from_choi,
    kraus_paper,
    kraus_repaired,
    propagator_choi,
)
from .errors import IntegratorFailure
from .lindblad import LindbladSpec, integrate
from .measures import trace_distance
from .reservoir import ReservoirParams, squeeze_bound
from .states import CorrelationTriple, state_from_correlations
from .sweep import SweepConfig, format_rows, run_evolve, run_sweep, summary_path

ORACLE_GRID_N = (0.0, 0.2, 0.6, 6.0)
ORACLE_GRID_M_FRAC = (0.0, 0.2, 0.9)
ORACLE_GRID_THETA = (0.0, math.pi / 2.0)
ORACLE_GRID_GT = (0.25, 1.0, 2.0, 5.0)


def _reservoir_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, default=1.0, help="per-qubit emission rate (default 1)")
    parser.add_argument("--n", type=float, default=0.0, help="mean photon number of both baths")
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--m-frac",
        type=float,
        default=0.0,
        help="two-photon correlation as a fraction of the bound sqrt(n(n+1))",
    )
    group.add_argument(
        "--m-abs", type=float, default=None, help="absolute two-photon correlation magnitude"
    )
    parser.add_argument("--theta", type=float, default=0.0, help="squeezing phase in radians")


def _triple_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c1", type=float, default=1.0, help="xx correlation (default 1)")
    parser.add_argument("--c2", type=float, default=-1.0, help="yy correlation (default -1)")
    parser.add_argument("--c3", type=float, default=1.0, help="zz correlation (default 1)")


def _series_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-max", type=float, default=10.0, help="horizon in scaled time Gamma*t")
    parser.add_argument("--samples", type=int, default=256, help="number of time samples (>= 2)")
    parser.add_argument("--esd-eps", type=float, default=1e-6, help="entanglement-death threshold")
    parser.add_argument("--out", required=True, help="output CSV path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esdsim",
        description="Two qubits in local thermal or squeezed reservoirs: "
        "entanglement and information dynamics through validated Kraus channels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="evolve one trajectory and write its CSV")
    _triple_args(p_evolve)
    _reservoir_args(p_evolve)
    _series_args(p_evolve)

    p_sweep = sub.add_parser("sweep", help="run a (n, m-fraction) grid and write CSV + summary")
    _triple_args(p_sweep)
    _reservoir_args(p_sweep)
    _series_args(p_sweep)
    p_sweep.add_argument(
        "--grid-n", default=None, help="comma-separated mean photon numbers (default: --n)"
    )
    p_sweep.add_argument(
        "--grid-m-frac", default=None, help="comma-separated bound fractions (default: --m-frac)"
    )

    p_val = sub.add_parser(
        "validate-kraus", help="audit the three Kraus constructions at one parameter point"
    )
    _reservoir_args(p_val)
    p_val.add_argument("--gamma-t", type=float, default=1.0, help="scaled time Gamma*t of the audit")

    p_oracle = sub.add_parser(
        "oracle-check", help="channel vs direct integration over the verification grid"
    )
    p_oracle.add_argument("--tol", type=float, default=1e-6, help="maximum allowed trace distance")

    return parser


def _reservoir_from_args(args) -> ReservoirParams:
    if args.m_abs is not None:
        return ReservoirParams(gamma=args.gamma, n=args.n, m_abs=args.m_abs, theta=args.theta)
    return ReservoirParams.from_fraction(
        gamma=args.gamma, n=args.n, m_frac=args.m_frac, theta=args.theta
    )


def _config_from_args(args) -> SweepConfig:
    res = _reservoir_from_args(args)
    grid_n = tuple(float(v) for v in args.grid_n.split(",")) if getattr(args, "grid_n", None) else ()
    grid_m = (
        tuple(float(v) for v in args.grid_m_frac.split(","))
        if getattr(args, "grid_m_frac", None)
        else ()
    )
    return SweepConfig(
        c_triple=CorrelationTriple(args.c1, args.c2, args.c3),
        reservoir_a=res,
        reservoir_b=replace(res),
        t_max=args.t_max,
        samples=args.samples,
        grid_n=grid_n,
        grid_m_frac=grid_m,
        esd_eps=args.esd_eps,
        output_path=args.out,
    )


def _cmd_evolve(args) -> int:
    cfg = _config_from_args(args)
    rows = run_evolve(cfg)
    with open(cfg.output_path, "w") as fh:
        fh.write(format_rows(rows))
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    out = run_sweep(cfg)
    print(f"wrote sweep to {out} (summary: {summary_path(out)})")
    return 0


def _cmd_validate_kraus(args) -> int:
    p = _reservoir_from_args(args)
    t = args.gamma_t / (2.0 * p.gamma)  # scaled time uses Gamma = gamma_a + gamma_b
    reference = propagator_choi(p, t)
    sets = [kraus_paper(p, t), kraus_repaired(p, t), kraus_from_choi(reference)]
    print(
        f"# gamma={p.gamma:g} n={p.n:g} m_abs={p.m_abs:g} theta={p.theta:g} "
        f"gamma_t={args.gamma_t:g} (t={t:g})"
    )
    print(f"{'provenance':<16}{'completeness_defect':>22}{'choi_trace_distance':>22}")
    for ks in sets:
        dist = trace_distance(choi_of_kraus(ks) / 2.0, reference / 2.0)
        print(f"{ks.provenance:<16}{ks.completeness_defect:>22.12g}{dist:>22.12g}")
    return 0


def oracle_grid() -> list[ReservoirParams]:
    """Parameter combinations of the verification grid (theta only where m > 0)."""
    points = []
    for n in ORACLE_GRID_N:
        fracs = ORACLE_GRID_M_FRAC if n > 0.0 else (0.0,)
        for frac in fracs:
            thetas = ORACLE_GRID_THETA if frac > 0.0 else (0.0,)
            for theta in thetas:
                points.append(
                    ReservoirParams(n=n, m_abs=frac * squeeze_bound(n), theta=theta)
                )
    return points


def channel_oracle_distance(p: ReservoirParams, gamma_t: float) -> float:
    """Trace distance between the Choi-derived channel output and direct integration."""
    rho0 = state_from_correlations(CorrelationTriple(1.0, -1.0, 1.0))
    t = gamma_t / (2.0 * p.gamma)
    ks = kraus_from_choi(propagator_choi(p, t))
    via_channel = apply_local_channels(rho0, ks, ks)
    via_oracle = integrate(rho0.mat, LindbladSpec(p, p), t, tol=1e-8).state
    return trace_distance(via_channel, via_oracle)


def _cmd_oracle_check(args) -> int:
    worst = 0.0
    failures = 0
    for p in oracle_grid():
        dists = [channel_oracle_distance(p, gt) for gt in ORACLE_GRID_GT]
        point_max = max(dists)
        worst = max(worst, point_max)
        status = "ok" if point_max <= args.tol else "FAIL"
        if status == "FAIL":
            failures += 1
        print(
            f"n={p.n:<8g} m_abs={p.m_abs:<12.6g} theta={p.theta:<8.6g} "
            f"max_trace_distance={point_max:.3e} {status}"
        )
    print(f"grid max trace distance: {worst:.3e} (tol {args.tol:g})")
    return 0 if failures == 0 else 1


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        return int(exc.code or 0)
    handlers = {
        "evolve": _cmd_evolve,
        "sweep": _cmd_sweep,
        "validate-kraus": _cmd_validate_kraus,
        "oracle-check": _cmd_oracle_check,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, IntegratorFailure, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

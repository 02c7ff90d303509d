"""Trajectory evolution and parameter-grid sweeps with deterministic CSV output.

Every emitted row is one (grid point, time sample) pair.  Evolution always
runs through Choi-derived Kraus sets (the validated channel); the time
grid is uniform in scaled time Gamma*t with Gamma = gamma_a + gamma_b, so
one Richardson-verified integration pass per reservoir yields the whole
Choi series.

The data CSV has exactly the columns

    t_scaled, n1, n2, m1, m2, theta1, theta2, c1, c2, c3,
    doe, disturbance, entropy, trace_defect, provenance

with numbers printed to 12 significant digits; identical configurations
therefore produce byte-identical files.  A sweep additionally writes a
sibling summary file ``<output>.summary.csv`` with one row per grid
point: grid_id, esd_time (empty when entanglement survives the horizon),
disturbance_plateau_time, entropy_saturation_value.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .channels import CHOI_DERIVED, apply_local_channels, choi_series, kraus_choi_derived, kraus_from_choi
from .errors import OutOfRange
from .measures import disturbance, entropy_exchange, esd_time, negativity, plateau_onset, saturation_onset
from .reservoir import ReservoirParams, squeeze_bound
from .states import CorrelationTriple, state_from_correlations

CSV_COLUMNS = (
    "t_scaled",
    "n1",
    "n2",
    "m1",
    "m2",
    "theta1",
    "theta2",
    "c1",
    "c2",
    "c3",
    "doe",
    "disturbance",
    "entropy",
    "trace_defect",
    "provenance",
)

SUMMARY_COLUMNS = ("grid_id", "esd_time", "disturbance_plateau_time", "entropy_saturation_value")

# slope / per-step thresholds for the summary detectors, in scaled time
PLATEAU_SLOPE_TOL = 1e-4
SATURATION_STEP_TOL = 1e-4

_CHOI_TOL = 1e-10


@dataclass(frozen=True)
class SweepConfig:
    c_triple: CorrelationTriple
    reservoir_a: ReservoirParams = ReservoirParams()
    reservoir_b: ReservoirParams = ReservoirParams()
    t_max: float = 10.0  # horizon in scaled time Gamma*t
    samples: int = 256
    grid_n: tuple[float, ...] = ()
    grid_m_frac: tuple[float, ...] = ()
    esd_eps: float = 1e-6
    output_path: str = "sweep.csv"

    def __post_init__(self):
        if self.samples < 2:
            raise OutOfRange(f"samples must be >= 2, got {self.samples}")
        if not self.t_max > 0.0:
            raise OutOfRange(f"t_max must be > 0, got {self.t_max}")
        for n in self.grid_n:
            if n < 0.0:
                raise OutOfRange(f"grid n values must be >= 0, got {n}")
        for frac in self.grid_m_frac:
            if not 0.0 <= frac <= 1.0:
                raise OutOfRange(f"grid m fractions must lie in [0, 1], got {frac}")

    @property
    def gamma_total(self) -> float:
        return self.reservoir_a.gamma + self.reservoir_b.gamma


@dataclass(frozen=True)
class TimeSeriesRow:
    t_scaled: float
    n1: float
    n2: float
    m1: float
    m2: float
    theta1: float
    theta2: float
    c1: float
    c2: float
    c3: float
    doe: float
    disturbance: float
    entropy: float
    trace_defect: float
    provenance: str


@dataclass(frozen=True)
class GridSummary:
    grid_id: str
    esd_time: float | None
    disturbance_plateau_time: float | None
    entropy_saturation_value: float | None


def run_evolve(cfg: SweepConfig) -> list[TimeSeriesRow]:
    """Single-trajectory evolution of the configured triple through its reservoirs."""
    rho0 = state_from_correlations(cfg.c_triple)
    pa, pb = cfg.reservoir_a, cfg.reservoir_b
    t_scaled = np.linspace(0.0, cfg.t_max, cfg.samples)
    t_phys = t_scaled / cfg.gamma_total
    chois_a = choi_series(pa, t_phys, tol=_CHOI_TOL)
    chois_b = chois_a if pb == pa else choi_series(pb, t_phys, tol=_CHOI_TOL)
    rows = []
    for k, ts in enumerate(t_scaled):
        ka = kraus_from_choi(chois_a[k])
        kb = ka if chois_b is chois_a else kraus_from_choi(chois_b[k])
        out = apply_local_channels(rho0, ka, kb)
        rows.append(
            TimeSeriesRow(
                t_scaled=float(ts),
                n1=pa.n,
                n2=pb.n,
                m1=pa.m_abs,
                m2=pb.m_abs,
                theta1=pa.theta,
                theta2=pb.theta,
                c1=float(cfg.c_triple[0]),
                c2=float(cfg.c_triple[1]),
                c3=float(cfg.c_triple[2]),
                doe=negativity(out),
                disturbance=disturbance(rho0, out),
                entropy=entropy_exchange(out),
                trace_defect=out.trace_defect,
                provenance=CHOI_DERIVED,
            )
        )
    return rows


def doe_refiner(cfg: SweepConfig):
    """Channel evaluation at an arbitrary scaled time, for bisection refinement."""
    rho0 = state_from_correlations(cfg.c_triple)
    pa, pb = cfg.reservoir_a, cfg.reservoir_b

    def doe_at(t_scaled: float) -> float:
        t = t_scaled / cfg.gamma_total
        ka = kraus_choi_derived(pa, t, tol=_CHOI_TOL)
        kb = ka if pb == pa else kraus_choi_derived(pb, t, tol=_CHOI_TOL)
        return negativity(apply_local_channels(rho0, ka, kb))

    return doe_at


def summarize(cfg: SweepConfig, rows: Sequence[TimeSeriesRow], grid_id: str) -> GridSummary:
    doe_series = [(r.t_scaled, r.doe) for r in rows]
    dist_series = [(r.t_scaled, r.disturbance) for r in rows]
    ent_series = [(r.t_scaled, r.entropy) for r in rows]
    esd = esd_time(doe_series, cfg.esd_eps, refine=doe_refiner(cfg))
    plateau = plateau_onset(dist_series, PLATEAU_SLOPE_TOL)
    sat_onset = saturation_onset(ent_series, SATURATION_STEP_TOL)
    sat_value = ent_series[-1][1] if sat_onset is not None else None
    return GridSummary(grid_id, esd, plateau, sat_value)


def grid_points(cfg: SweepConfig) -> list[tuple[str, SweepConfig]]:
    """Cartesian product of the n and m-fraction grids, in declared order.

    Both reservoirs take the grid values (symmetric sweep); the template
    reservoirs supply gamma and theta.  An empty grid means the configured
    reservoirs themselves form the single point.
    """
    ns = cfg.grid_n or (cfg.reservoir_a.n,)
    fracs = cfg.grid_m_frac if cfg.grid_m_frac else None
    points = []
    for n in ns:
        for frac in fracs if fracs is not None else (None,):
            if frac is None:
                pa = replace(cfg.reservoir_a, n=n)
                pb = replace(cfg.reservoir_b, n=n)
                gid = f"n{n:g}_m{cfg.reservoir_a.m_abs:g}"
            else:
                m_abs = frac * squeeze_bound(n)
                pa = replace(cfg.reservoir_a, n=n, m_abs=m_abs)
                pb = replace(cfg.reservoir_b, n=n, m_abs=m_abs)
                gid = f"n{n:g}_mf{frac:g}"
            points.append((gid, replace(cfg, reservoir_a=pa, reservoir_b=pb)))
    return points


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.12g}"


def format_rows(rows: Sequence[TimeSeriesRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def format_summary(summaries: Sequence[GridSummary]) -> str:
    lines = [",".join(SUMMARY_COLUMNS)]
    for s in summaries:
        lines.append(",".join(_fmt(getattr(s, col)) for col in SUMMARY_COLUMNS))
    return "\n".join(lines) + "\n"


def summary_path(output_path: str | Path) -> Path:
    out = Path(output_path)
    return out.with_name(out.stem + ".summary" + (out.suffix or ".csv"))


def run_sweep(cfg: SweepConfig) -> Path:
    """Run every grid point, write the data CSV and its summary sibling.

    Grid points are independent and could run in parallel; rows are
    always written in grid order, then time order, so the output does not
    depend on execution order.
    """
    out = Path(cfg.output_path)
    all_rows: list[TimeSeriesRow] = []
    summaries: list[GridSummary] = []
    for gid, point_cfg in grid_points(cfg):
        rows = run_evolve(point_cfg)
        summaries.append(summarize(point_cfg, rows, gid))
        all_rows.extend(rows)
    out.write_text(format_rows(all_rows))
    summary_path(out).write_text(format_summary(summaries))
    return out

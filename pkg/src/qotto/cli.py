"""Command-line front end: validate a TOML config, run one experiment,
and write its CSV (plus SVG for the region and cavity kinds) atomically.

    qotto <kind> --config <path> [--out-dir <path>] [--seed <u64>]

Exit codes: 0 success, 2 configuration problem (with the offending field),
3 physically unsatisfiable parameters (for example delta2 >= delta1).
QOTTO_THREADS caps worker threads for the stochastic kinds (0 = auto).
Identical config and seed give byte-identical output files at any worker
count; the writers only serialise values handed to them by the physics
modules.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .cavity import (
    CavityParams,
    ReachableRegion,
    bound_operating_point,
    evolve_occupation,
    max_cycle_work_bound,
    occupation_bounds,
    rabi_sum,
    region_geometry,
    thermal_baseline_work,
)
from .config import OBSERVABLES, ConfigError, ExperimentConfig, load_config
from .core import (
    BathSpec,
    GapSchedule,
    carnot_efficiency,
    extraction_condition,
    gibbs_upper,
    net_extracted_work,
    otto_efficiency,
)
from .stochastic import CycleParams, RngSeed, run_daemon, run_ensemble
from .svg import region_figure_svg, timeseries_figure_svg
from .table import ResultTable, write_csv
from ._io import atomic_write_text


def _cycle_params(config: ExperimentConfig) -> CycleParams:
    if config.probabilities is not None:
        p_up, p_stay = config.probabilities
        return CycleParams(config.gaps, p_up, p_stay)
    return CycleParams.from_baths(config.gaps, config.bath1, config.bath2)


def _resolved_seed(config: ExperimentConfig, seed_override) -> int:
    seed = config.seed if seed_override is None else seed_override
    if seed is None:
        raise ConfigError("seed: required (set it in the config or pass --seed)")
    try:
        return RngSeed(seed).seed
    except ValueError as exc:
        raise ConfigError(f"seed: {exc}") from exc


def _run_thermal(config, seed, n_workers, out_dir):
    gaps, bath1, bath2 = config.gaps, config.bath1, config.bath2
    p1 = float(gibbs_upper(gaps.delta1, bath1))
    p2 = float(gibbs_upper(gaps.delta2, bath2))
    carnot = (
        carnot_efficiency(bath1, bath2)
        if bath1.temperature > bath2.temperature
        else float("nan")
    )
    table = ResultTable(
        (
            "delta1", "delta2", "kT1", "kT2", "p_upper_hot", "p_upper_cold",
            "work", "efficiency", "carnot_efficiency", "condition",
        )
    )
    table.append(
        gaps.delta1, gaps.delta2, bath1.temperature, bath2.temperature, p1, p2,
        net_extracted_work(p1, p2, gaps), otto_efficiency(gaps), carnot,
        extraction_condition(bath1, bath2, gaps),
    )
    return table, []


def _run_montecarlo(config, seed, n_workers, out_dir):
    params = _cycle_params(config)
    stats = run_ensemble(seed, config.n_cycles, params, n_workers=n_workers)
    table = ResultTable(
        (
            "seed", "n_cycles", "delta1", "delta2", "p_excite",
            "p_deexcite_complement", "mean_work", "stderr_work",
            "violation_frequency", "mean_heat1", "mean_heat2",
            "analytic_mean_work", "analytic_violation_frequency",
        )
    )
    table.append(
        seed, stats.n_cycles, params.gaps.delta1, params.gaps.delta2,
        params.p_excite, params.p_deexcite_complement, stats.mean_work,
        stats.stderr_work, stats.violation_frequency, stats.mean_heat1,
        stats.mean_heat2, params.mean_work, params.work_cycle_probability,
    )
    return table, []


def _run_daemon(config, seed, n_workers, out_dir):
    params = _cycle_params(config)
    ledger = run_daemon(
        seed, config.n_attempts, params, config.erase_temperature, n_workers=n_workers
    )
    table = ResultTable(
        (
            "seed", "n_attempts", "delta1", "delta2", "p_excite",
            "p_deexcite_complement", "erase_temperature", "completed_cycles",
            "measurement_bits", "gross_work", "erasure_heat", "net_work",
        )
    )
    table.append(
        seed, ledger.attempts, params.gaps.delta1, params.gaps.delta2,
        params.p_excite, params.p_deexcite_complement, ledger.erase_temperature,
        ledger.completed_cycles, ledger.measurement_bits, ledger.gross_work,
        ledger.erasure_heat, ledger.net_work,
    )
    return table, []


def _run_cavity(config, seed, n_workers, out_dir):
    params = config.cavity
    p0 = config.p0
    t_max = config.t_max if config.t_max is not None else 50.0 / params.coupling
    times = np.linspace(0.0, t_max, config.n_times)
    s_values = np.asarray(rabi_sum(times, params))
    p_values = np.asarray(evolve_occupation(p0, times, params))
    lo, hi = occupation_bounds(p0, params)
    table = ResultTable(("time", "rabi_sum", "p_upper", "bound_lo", "bound_hi"))
    for k in range(times.size):
        table.append(float(times[k]), float(s_values[k]), float(p_values[k]), lo, hi)

    gibbs_point = ReachableRegion.from_params(params).gibbs_point
    trace = tuple(
        (float(times[k] / t_max), float(p_values[k])) for k in range(times.size)
    )
    svg_path = Path(out_dir) / config.svg_name
    atomic_write_text(svg_path, timeseries_figure_svg(trace, lo, hi, gibbs_point))
    return table, [svg_path]


def emit_region_figure(hot: CavityParams, cold: CavityParams, path) -> Path:
    """Write the entry/exit-region figure for a hot/cold cavity pair."""
    geometry = region_geometry(hot, cold)
    return atomic_write_text(path, region_figure_svg(geometry))


def _run_region(config, seed, n_workers, out_dir):
    hot, cold, gaps = config.hot_cavity, config.cold_cavity, config.gaps
    geometry = region_geometry(hot, cold)
    p_a, p_b = bound_operating_point(hot, cold)
    table = ResultTable(
        (
            "n_bar_hot", "n_bar_cold", "gibbs_hot", "gibbs_cold", "p_a", "p_b",
            "max_work", "thermal_work", "overlap_area",
        )
    )
    table.append(
        geometry.n_bar_hot, geometry.n_bar_cold, geometry.gibbs_hot,
        geometry.gibbs_cold, p_a, p_b,
        max_cycle_work_bound(hot, cold, gaps),
        thermal_baseline_work(
            BathSpec(hot.temperature), BathSpec(cold.temperature), gaps
        ),
        geometry.overlap_area,
    )
    svg_path = Path(out_dir) / config.svg_name
    emit_region_figure(hot, cold, svg_path)
    return table, [svg_path]


def _sweep_cell_value(observable, base: dict) -> object:
    gaps = GapSchedule(base["delta1"], base["delta2"])
    if observable.needs_baths:
        return observable.fn(gaps, BathSpec(base["T1"]), BathSpec(base["T2"]))
    return observable.fn(gaps, None, None)


def sweep(config: ExperimentConfig) -> ResultTable:
    """Cartesian-product evaluation of the configured observable, outer axis
    major, one row per grid cell."""
    observable = OBSERVABLES[config.observable]
    axes = config.axes
    columns = tuple(axis.parameter for axis in axes) + (config.observable,)
    table = ResultTable(columns)
    if len(axes) == 1:
        for value in axes[0].values():
            base = dict(config.sweep_base)
            base[axes[0].parameter] = value
            table.append(value, _sweep_cell_value(observable, base))
    else:
        outer, inner = axes
        for outer_value in outer.values():
            for inner_value in inner.values():
                base = dict(config.sweep_base)
                base[outer.parameter] = outer_value
                base[inner.parameter] = inner_value
                table.append(outer_value, inner_value, _sweep_cell_value(observable, base))
    return table


def _run_sweep(config, seed, n_workers, out_dir):
    return sweep(config), []


_RUNNERS = {
    "thermal": _run_thermal,
    "montecarlo": _run_montecarlo,
    "daemon": _run_daemon,
    "cavity": _run_cavity,
    "region": _run_region,
    "sweep": _run_sweep,
}

_NEEDS_SEED = ("montecarlo", "daemon")


def run_config(
    config: ExperimentConfig,
    out_dir=".",
    seed=None,
    n_workers: int = 1,
) -> tuple:
    """Dispatch one validated config and write its output files.

    Returns (table, written paths).  The CSV always comes first in the
    path list; figure files follow.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolved = _resolved_seed(config, seed) if config.kind in _NEEDS_SEED else None
    table, extra_paths = _RUNNERS[config.kind](config, resolved, n_workers, out_dir)
    csv_path = out_dir / config.csv_name
    write_csv(table, csv_path)
    return table, [csv_path] + extra_paths


def _worker_count() -> int:
    raw = os.environ.get("QOTTO_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"QOTTO_THREADS: expected an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigError(f"QOTTO_THREADS: must be nonnegative, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qotto",
        description="Run one two-level engine experiment from a TOML config.",
    )
    parser.add_argument("kind", choices=sorted(_RUNNERS), help="experiment kind")
    parser.add_argument("--config", required=True, type=Path, help="TOML experiment file")
    parser.add_argument("--out-dir", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        if config.kind != args.kind:
            raise ConfigError(
                f"kind: config declares {config.kind!r} but {args.kind!r} was requested"
            )
        _, paths = run_config(
            config, out_dir=args.out_dir, seed=args.seed, n_workers=_worker_count()
        )
    except ConfigError as exc:
        print(f"qotto: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"qotto: infeasible physics: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"qotto: i/o error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0

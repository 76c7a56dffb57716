"""Experiment drivers: configuration, initial data, artifact writers.

Four experiments share one RunConfig: a convergence study against a
fine-step benchmark, long-time coarsening with field snapshots, the
bound-violation demonstration, and a two-scheme efficiency comparison.
Every run writes CSV/JSON artifacts plus a manifest embedding the full
configuration, and reruns with the same seed produce byte-identical
CSV files.  Wall-clock timings live in summary JSONs, never in CSVs.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .diagnostics import Record, TimeSeries, sup_norm
from .grid import Field, GridSpec
from .integrator import Stepper, integrate
from .nonlinearity import ReactionTerm, cubic, flory_huggins
from .operators import LinearOperator, build_periodic_laplacian
from .schemes import (
    ShuOsherTableau,
    TableauError,
    builtin,
    max_timestep,
    mbp_constant,
    validate,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "run_coarsening",
    "run_compare",
    "run_convergence_study",
    "run_violation_demo",
    "tableau_info",
]

EXPERIMENTS = ("converge", "coarsen", "violation_demo", "compare", "tableau_info")
IC_KINDS = ("random", "smooth", "constant", "file")
TERMS = ("cubic", "flory")
SNAPSHOT_FORMATS = ("raw", "csv")


class ConfigError(ValueError):
    """A RunConfig is inconsistent or incomplete for its experiment."""


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one experiment run.

    The same schema is accepted as JSON (`from_json`); every field can
    be overridden by CLI flags.  `pairs` is only used by the compare
    experiment: exactly two (scheme, tau) entries, each optionally
    carrying its own n_per_axis (which must agree, the comparison
    needs a common grid).
    """

    experiment: str = "coarsen"
    schemes: tuple[str, ...] = ("IFRK4",)
    dim: int = 2
    n_per_axis: int = 128
    eps2: float = 0.01
    term: str = "flory"
    theta: float = 0.8
    theta_c: float = 1.6
    tau: float = 0.08
    tau_ladder: tuple[float, ...] = ()
    benchmark_scheme: str = "IFRK4"
    benchmark_tau: float | None = None
    fit_window: int = 5
    fit_floor_factor: float = 100.0
    t_end: float = 30.0
    seed: int = 0
    ic_kind: str = "random"
    ic_lo: float = -0.8
    ic_hi: float = 0.8
    ic_value: float = 0.0
    ic_path: str | None = None
    out: str | None = None
    record_every: int = 1
    enforce_mbp: bool = False
    snapshot_times: tuple[float, ...] = ()
    snapshot_format: str = "raw"
    pairs: tuple[tuple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "schemes", _as_str_tuple(self.schemes))
        object.__setattr__(self, "tau_ladder", tuple(float(x) for x in self.tau_ladder))
        object.__setattr__(self, "snapshot_times", tuple(float(x) for x in self.snapshot_times))
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    @classmethod
    def from_json(cls, source) -> "RunConfig":
        """Load from a JSON file path, JSON text, or a plain dict."""
        if isinstance(source, dict):
            data = source
        else:
            text = str(source)
            if not text.lstrip().startswith("{"):
                try:
                    text = Path(source).read_text()
                except OSError as exc:
                    raise ConfigError(f"cannot read config file {source!r}: {exc}") from exc
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, tuple):
                data[key] = [list(v) if isinstance(v, tuple) else v for v in value]
        return data

    def validated(self) -> "RunConfig":
        """Raise ConfigError on any inconsistency; return self."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; one of {', '.join(EXPERIMENTS)}"
            )
        if self.dim not in (1, 2, 3):
            raise ConfigError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n_per_axis < 2:
            raise ConfigError(f"n_per_axis must be >= 2, got {self.n_per_axis}")
        if not (math.isfinite(self.eps2) and self.eps2 >= 0):
            raise ConfigError(f"eps2 must be a nonnegative number, got {self.eps2!r}")
        if self.term not in TERMS:
            raise ConfigError(f"term must be one of {', '.join(TERMS)}, got {self.term!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ConfigError(f"tau must be positive, got {self.tau!r}")
        if not (math.isfinite(self.t_end) and self.t_end >= 0):
            raise ConfigError(f"t_end must be nonnegative, got {self.t_end!r}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be >= 1, got {self.record_every}")
        if self.ic_kind not in IC_KINDS:
            raise ConfigError(f"ic_kind must be one of {', '.join(IC_KINDS)}")
        if self.ic_kind == "file" and not self.ic_path:
            raise ConfigError("ic_kind = file requires ic_path")
        if self.snapshot_format not in SNAPSHOT_FORMATS:
            raise ConfigError(f"snapshot_format must be one of {', '.join(SNAPSHOT_FORMATS)}")

        term = build_term(self)  # validates theta ordering
        if self.ic_kind == "random":
            lo, hi = self.ic_lo, self.ic_hi
            if not lo <= hi:
                raise ConfigError(f"ic_lo = {lo!r} must not exceed ic_hi = {hi!r}")
            dlo, dhi = term.domain
            if not (dlo < lo and hi < dhi):
                raise ConfigError(
                    f"random initial bounds [{lo}, {hi}] must lie inside the "
                    f"term domain ({dlo}, {dhi})"
                )

        if self.experiment == "converge":
            if not self.tau_ladder:
                raise ConfigError("convergence study needs a tau_ladder")
            if any(not (math.isfinite(t) and t > 0) for t in self.tau_ladder):
                raise ConfigError("tau_ladder entries must be positive")
            if len(set(self.tau_ladder)) != len(self.tau_ladder):
                raise ConfigError("tau_ladder entries must be distinct")
            bench = self.resolved_benchmark_tau()
            if bench >= min(self.tau_ladder):
                raise ConfigError(
                    f"benchmark tau {bench!r} must be smaller than the smallest "
                    f"ladder entry {min(self.tau_ladder)!r}"
                )
            if self.fit_window < 2:
                raise ConfigError("fit_window must be at least 2")

        if self.experiment == "compare":
            if len(self.pairs) != 2:
                raise ConfigError("compare needs exactly two (scheme, tau) pairs")
            for pair in self.pairs:
                if len(pair) not in (2, 3):
                    raise ConfigError(f"malformed compare pair {pair!r}")
                name, tau = pair[0], float(pair[1])
                if not isinstance(name, str):
                    raise ConfigError(f"pair scheme must be a string, got {name!r}")
                if not (math.isfinite(tau) and tau > 0):
                    raise ConfigError(f"pair tau must be positive, got {tau!r}")
            sizes = {int(p[2]) if len(p) == 3 else self.n_per_axis for p in self.pairs}
            if len(sizes) != 1:
                raise ConfigError(f"compare pairs resolve to different grids: {sorted(sizes)}")

        for t_snap in self.snapshot_times:
            if not 0 <= t_snap <= self.t_end:
                raise ConfigError(f"snapshot time {t_snap} outside [0, {self.t_end}]")
            steps = t_snap / self.tau
            if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
                raise ConfigError(
                    f"snapshot time {t_snap} is not a multiple of tau = {self.tau}"
                )
        return self

    def resolved_benchmark_tau(self) -> float:
        if self.benchmark_tau is not None:
            return float(self.benchmark_tau)
        if not self.tau_ladder:
            raise ConfigError("benchmark_tau unset and no tau_ladder to derive it from")
        return min(self.tau_ladder) / 10.0


def _as_str_tuple(value) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    return tuple(str(v) for v in value)


# -- building blocks ----------------------------------------------------------


def build_term(cfg: RunConfig) -> ReactionTerm:
    if cfg.term == "cubic":
        return cubic()
    try:
        return flory_huggins(cfg.theta, cfg.theta_c)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_grid(cfg: RunConfig, n_per_axis: int | None = None) -> GridSpec:
    return GridSpec(dim=cfg.dim, n_per_axis=n_per_axis or cfg.n_per_axis)


def build_operator(cfg: RunConfig, grid: GridSpec) -> LinearOperator:
    return build_periodic_laplacian(grid, cfg.eps2)


def _smooth_profile(grid: GridSpec) -> Callable:
    """Low-mode sine blend used for convergence studies.

    Smooth, zero-mean, well inside every term's domain, with enough
    modes that no scheme sees an accidentally symmetric special case.
    """
    if grid.dim == 1:
        return lambda x: 0.1 * (np.sin(3 * np.pi * x) + np.sin(5 * np.pi * x))
    if grid.dim == 2:
        return lambda x, y: 0.1 * (
            np.sin(3 * np.pi * x) * np.sin(2 * np.pi * y)
            + np.sin(5 * np.pi * x) * np.sin(5 * np.pi * y)
        )
    return lambda x, y, z: 0.1 * (
        np.sin(3 * np.pi * x) * np.sin(2 * np.pi * y) * np.sin(2 * np.pi * z)
        + np.sin(5 * np.pi * x) * np.sin(5 * np.pi * y) * np.sin(5 * np.pi * z)
    )


def initial_field(cfg: RunConfig, grid: GridSpec) -> Field:
    """Deterministic initial data: the RNG is seeded fresh per call."""
    if cfg.ic_kind == "random":
        rng = np.random.default_rng(cfg.seed)
        return Field.random_uniform(grid, cfg.ic_lo, cfg.ic_hi, rng)
    if cfg.ic_kind == "smooth":
        return Field.from_function(grid, _smooth_profile(grid))
    if cfg.ic_kind == "constant":
        return Field.constant(grid, cfg.ic_value)
    values = np.fromfile(cfg.ic_path, dtype="<f8")
    if values.size != grid.m:
        raise ConfigError(
            f"initial field file {cfg.ic_path} holds {values.size} values, "
            f"grid needs {grid.m}"
        )
    return Field(values=values.astype(float), grid=grid)


# -- artifact writers ---------------------------------------------------------


def _out_dir(cfg: RunConfig) -> Path | None:
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt_time(t: float) -> str:
    return ("%g" % t).replace(".", "p").replace("-", "m")


def write_manifest(out: Path, cfg: RunConfig, artifacts: Sequence[str]) -> Path:
    from . import __version__

    manifest = {
        "package": "ifrk",
        "version": __version__,
        "config": cfg.to_dict(),
        "artifacts": sorted(artifacts),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def write_snapshot(out: Path, stem: str, u: Field, t: float, fmt: str) -> list[str]:
    """Raw little-endian float64 (row-major) or CSV, plus a JSON sidecar."""
    base = f"{stem}_t{_fmt_time(t)}"
    names = []
    if fmt == "raw":
        data_name = base + ".raw"
        u.values.astype("<f8").tofile(out / data_name)
    else:
        data_name = base + ".csv"
        np.savetxt(out / data_name, u.lattice().reshape(u.grid.n_per_axis, -1),
                   delimiter=",", fmt="%.17g")
    sidecar = {
        "t": t,
        "dim": u.grid.dim,
        "n_per_axis": u.grid.n_per_axis,
        "h": u.grid.h,
        "dtype": "<f8",
        "order": "C",
        "format": fmt,
        "data": data_name,
    }
    (out / (base + ".json")).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    names.extend([data_name, base + ".json"])
    return names


def _write_series_plot(out: Path, csv_names: Sequence[str]) -> str:
    lines = [
        "# gnuplot script: sup-norm and energy traces",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 't'",
    ]
    for name in sorted(csv_names):
        lines.append(f"plot '{name}' using 1:2 with lines title '{name} sup', \\")
        lines.append(f"     '{name}' using 1:3 with lines title '{name} energy'")
        lines.append("pause -1")
    (out / "plot.gp").write_text("\n".join(lines) + "\n")
    return "plot.gp"


def _write_convergence_plot(out: Path, schemes: Sequence[str]) -> str:
    lines = [
        "# gnuplot script: error vs step size, log-log",
        "set datafile separator ','",
        "set logscale xy 2",
        "set xlabel 'tau'",
        "set ylabel 'sup error'",
        "plot " + ", \\\n     ".join(
            f"'convergence.csv' using 2:(strcol(1) eq '{name}' ? $3 : 1/0) "
            f"with linespoints title '{name}'"
            for name in sorted(schemes)
        ),
        "pause -1",
    ]
    (out / "plot.gp").write_text("\n".join(lines) + "\n")
    return "plot.gp"


# -- shared run plumbing ------------------------------------------------------


def _shift_records(part: TimeSeries, offset: float, drop_first: bool) -> list[Record]:
    records = part.records[1:] if drop_first and part.records else part.records
    if offset == 0.0:
        return list(records)
    return [
        Record(t=offset + r.t, sup_norm=r.sup_norm, energy=r.energy, mbp_ok=r.mbp_ok)
        for r in records
    ]


def _run_with_snapshots(
    stepper: Stepper,
    u0: Field,
    t_end: float,
    record_every: int,
    snapshot_times: Sequence[float],
    take: Callable[[Field, float], None],
) -> tuple[Field, TimeSeries]:
    """Integrate to t_end, calling take(u, t) at each snapshot time.

    Snapshot times sit on the step grid (validated), so segmenting the
    run at them leaves the trajectory unchanged.
    """
    snap_set = {float(t) for t in snapshot_times if 0.0 < t <= t_end}
    if any(t == 0.0 for t in snapshot_times):
        take(u0, 0.0)
    targets = sorted(snap_set | {t_end}) if t_end > 0 else []

    u = u0
    t0 = 0.0
    records: list[Record] = []
    status = "completed"
    for t_next in targets:
        span = t_next - t0
        if span > 0:
            u, part = integrate(stepper, u, span, record_every)
            records.extend(_shift_records(part, t0, drop_first=t0 > 0))
            if part.status != "completed":
                status = part.status
                break
        if t_next in snap_set:
            take(u, t_next)
        t0 = t_next
    return u, TimeSeries(records=tuple(records), status=status)


def _timed_run(
    cfg: RunConfig,
    tableau: ShuOsherTableau,
    tau: float,
    grid: GridSpec,
    u0: Field,
    record_every: int,
    snapshot_times: Sequence[float] = (),
    take: Callable[[Field, float], None] | None = None,
) -> tuple[Field, TimeSeries, float]:
    term = build_term(cfg)
    op = build_operator(cfg, grid)
    stepper = Stepper(op, term, tableau, tau, enforce_mbp_bound=cfg.enforce_mbp)
    start = time.perf_counter()
    if snapshot_times and take is not None:
        final, series = _run_with_snapshots(
            stepper, u0, cfg.t_end, record_every, snapshot_times, take
        )
    else:
        final, series = integrate(stepper, u0, cfg.t_end, record_every)
    wall = time.perf_counter() - start
    return final, series, wall


# -- experiments --------------------------------------------------------------


def run_convergence_study(cfg: RunConfig) -> dict:
    """Error ladder against a fine-step benchmark, with fitted orders.

    Each (scheme, tau) cell integrates the same initial data to t_end;
    the error is the final-state sup distance to the benchmark run.
    Orders are least-squares slopes of log2(error) against log2(tau)
    over the smallest fit_window steps whose error sits above the
    rounding floor (fit_floor_factor * machine epsilon * benchmark sup).
    """
    cfg = replace(cfg, experiment="converge").validated()
    grid = build_grid(cfg)
    u0 = initial_field(cfg, grid)

    bench_tab = builtin(cfg.benchmark_scheme)
    bench_tau = cfg.resolved_benchmark_tau()
    bench_final, _, _ = _timed_run(cfg, bench_tab, bench_tau, grid, u0, record_every=10**9)
    if bench_final.blown_up:
        raise ConfigError("benchmark run blew up; configuration is not integrable")
    bench_sup = sup_norm(bench_final)
    floor = cfg.fit_floor_factor * np.finfo(float).eps * bench_sup

    rows: list[tuple[str, float, float]] = []
    for name in sorted(cfg.schemes):
        tab = builtin(name)
        for tau in sorted(cfg.tau_ladder, reverse=True):
            final, _, _ = _timed_run(cfg, tab, tau, grid, u0, record_every=10**9)
            if final.blown_up:
                err = math.inf
            else:
                err = float(np.max(np.abs(final.values - bench_final.values)))
            rows.append((name, tau, err))

    orders: dict[str, dict] = {}
    for name in sorted(cfg.schemes):
        cells = [(tau, err) for s, tau, err in rows if s == name]
        usable = [(tau, err) for tau, err in cells if math.isfinite(err) and err > floor]
        usable.sort(key=lambda cell: cell[0])
        window = usable[: cfg.fit_window]
        entry = {
            "expected_order": builtin(name).order,
            "points_used": len(window),
            "error_floor": floor,
        }
        if len(window) >= 2:
            taus = np.log2([tau for tau, _ in window])
            errs = np.log2([err for _, err in window])
            entry["fitted_order"] = float(np.polyfit(taus, errs, 1)[0])
        else:
            entry["fitted_order"] = math.nan
        orders[name] = entry

    out = _out_dir(cfg)
    artifacts: list[str] = []
    if out is not None:
        with open(out / "convergence.csv", "w", newline="") as fh:
            fh.write("scheme,tau,error\n")
            for name, tau, err in rows:
                fh.write(f"{name},{'%.17g' % tau},{'%.17g' % err}\n")
        (out / "orders.json").write_text(json.dumps(orders, indent=2, sort_keys=True) + "\n")
        artifacts += ["convergence.csv", "orders.json"]
        artifacts.append(_write_convergence_plot(out, cfg.schemes))
        write_manifest(out, cfg, artifacts)

    return {
        "rows": rows,
        "orders": orders,
        "benchmark_tau": bench_tau,
        "benchmark_sup": bench_sup,
        "out": str(out) if out is not None else None,
    }


def run_coarsening(cfg: RunConfig) -> dict:
    """Long-time integration per scheme with series, snapshots, summary."""
    cfg = replace(cfg, experiment="coarsen").validated()
    grid = build_grid(cfg)
    out = _out_dir(cfg)
    artifacts: list[str] = []
    results: dict[str, dict] = {}
    series_by_scheme: dict[str, TimeSeries] = {}
    final_by_scheme: dict[str, Field] = {}
    csv_names: list[str] = []

    for name in cfg.schemes:
        tab = builtin(name)
        u0 = initial_field(cfg, grid)
        snapshot_names: list[str] = []

        def take(u: Field, t: float, _name=name, _snaps=snapshot_names):
            if out is not None:
                _snaps.extend(
                    write_snapshot(out, _name, u, t, cfg.snapshot_format)
                )

        final, series, wall = _timed_run(
            cfg, tab, cfg.tau, grid, u0, cfg.record_every,
            snapshot_times=cfg.snapshot_times, take=take,
        )
        series_by_scheme[name] = series
        final_by_scheme[name] = final
        entry = dict(series.summary())
        entry["wall_seconds"] = wall
        entry["snapshots"] = sorted(snapshot_names)
        if out is not None:
            csv_name = f"{name}_series.csv"
            series.to_csv(out / csv_name)
            entry["series_csv"] = csv_name
            csv_names.append(csv_name)
            artifacts += [csv_name, *snapshot_names]
        results[name] = entry

    if out is not None:
        (out / "summary.json").write_text(
            json.dumps(results, indent=2, sort_keys=True) + "\n"
        )
        artifacts.append("summary.json")
        artifacts.append(_write_series_plot(out, csv_names))
        write_manifest(out, cfg, artifacts)

    return {
        "results": results,
        "series": series_by_scheme,
        "final": final_by_scheme,
        "out": str(out) if out is not None else None,
    }


def run_violation_demo(cfg: RunConfig) -> dict:
    """Run a scheme regardless of admissibility and report violations.

    Non-admissible schemes are flagged with a warning and run anyway;
    watching the bound fail is the point.  Blow-up is recorded in the
    series status, never raised.
    """
    cfg = replace(cfg, experiment="violation_demo").validated()
    grid = build_grid(cfg)
    out = _out_dir(cfg)
    artifacts: list[str] = []
    results: dict[str, dict] = {}
    series_by_scheme: dict[str, TimeSeries] = {}
    csv_names: list[str] = []

    for name in cfg.schemes:
        tab = builtin(name)
        report = validate(tab)
        if not report.mbp_admissible:
            warnings.warn(
                f"scheme {tab.name} is not bound-preserving "
                f"({'; '.join(report.failures)}); running anyway",
                stacklevel=2,
            )
        u0 = initial_field(cfg, grid)
        final, series, wall = _timed_run(cfg, tab, cfg.tau, grid, u0, cfg.record_every)
        series_by_scheme[name] = series
        entry = dict(series.summary())
        entry["wall_seconds"] = wall
        entry["mbp_admissible"] = report.mbp_admissible
        if out is not None:
            csv_name = f"{name}_series.csv"
            series.to_csv(out / csv_name)
            entry["series_csv"] = csv_name
            csv_names.append(csv_name)
            artifacts.append(csv_name)
        results[name] = entry

    if out is not None:
        (out / "summary.json").write_text(
            json.dumps(results, indent=2, sort_keys=True) + "\n"
        )
        artifacts.append("summary.json")
        artifacts.append(_write_series_plot(out, csv_names))
        write_manifest(out, cfg, artifacts)

    return {
        "results": results,
        "series": series_by_scheme,
        "out": str(out) if out is not None else None,
    }


def run_compare(cfg: RunConfig) -> dict:
    """Run exactly two (scheme, tau) pairs on one config; report the
    wall-clock ratio (second over first) and final-state sup distance."""
    cfg = replace(cfg, experiment="compare").validated()
    n = int(cfg.pairs[0][2]) if len(cfg.pairs[0]) == 3 else cfg.n_per_axis
    grid = build_grid(cfg, n)
    out = _out_dir(cfg)
    artifacts: list[str] = []
    runs: list[dict] = []
    finals: list[Field] = []
    series_list: list[TimeSeries] = []
    csv_names: list[str] = []

    for idx, pair in enumerate(cfg.pairs):
        name, tau = str(pair[0]), float(pair[1])
        tab = builtin(name)
        u0 = initial_field(cfg, grid)
        final, series, wall = _timed_run(cfg, tab, tau, grid, u0, cfg.record_every)
        finals.append(final)
        series_list.append(series)
        entry = {
            "scheme": tab.name,
            "tau": tau,
            "wall_seconds": wall,
            "status": series.status,
            "steps": round(cfg.t_end / tau),
        }
        if out is not None:
            csv_name = f"pair{idx}_{tab.name}_series.csv"
            series.to_csv(out / csv_name)
            entry["series_csv"] = csv_name
            csv_names.append(csv_name)
            artifacts.append(csv_name)
        runs.append(entry)

    if finals[0].blown_up or finals[1].blown_up:
        distance = math.inf
    else:
        distance = float(np.max(np.abs(finals[0].values - finals[1].values)))
    ratio = runs[1]["wall_seconds"] / runs[0]["wall_seconds"]
    report = {
        "pairs": runs,
        "wall_ratio_second_over_first": ratio,
        "distance_inf": distance,
    }

    if out is not None:
        (out / "comparison.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n"
        )
        artifacts.append("comparison.json")
        artifacts.append(_write_series_plot(out, csv_names))
        write_manifest(out, cfg, artifacts)

    return {
        "report": report,
        "series": series_list,
        "final": finals,
        "ratio": ratio,
        "distance_inf": distance,
        "out": str(out) if out is not None else None,
    }


def tableau_info(name: str, term: ReactionTerm | None = None) -> dict:
    """Coefficients, scheme constants and admissibility as plain JSON."""
    tab = builtin(name)
    report = validate(tab)
    info: dict = {
        "name": tab.name,
        "order": tab.order,
        "stages": tab.s,
        "c": [str(x) for x in tab.c],
        "alpha": [[str(x) for x in row] for row in tab.alpha],
        "beta": [[str(x) for x in row] for row in tab.beta],
        "has_negative_beta": tab.has_negative_beta,
        "has_negative_exponent_shift": tab.has_negative_exponent_shift,
        "mbp_admissible": report.mbp_admissible,
        "checks": {label: ok for label, ok in report.checks},
        "failures": list(report.failures),
    }
    if tab.d is not None:
        info["d"] = [[str(x) for x in row] for row in tab.d]
    try:
        consts = mbp_constant(tab)
        info["c_plus"] = str(consts.c_plus) if consts.c_plus is not None else None
        info["c_minus"] = str(consts.c_minus) if consts.c_minus is not None else None
    except TableauError as exc:
        info["c_plus"] = info["c_minus"] = None
        info["constant_error"] = str(exc)
    if term is not None:
        info["term"] = term.name
        info["rho"] = term.rho
        info["omega_plus"] = term.omega_plus
        info["omega_minus"] = term.omega_minus
        info["max_timestep"] = max_timestep(tab, term)
    return info

"""Command line entry point.

Subcommands mirror the experiments: converge, coarsen, violate,
compare, tableau-info.  Options layer as defaults < --config JSON <
explicit flags.  Exit codes: 0 success, 2 configuration error, 3
blow-up detected (violate exits 0 regardless, blow-up is its purpose).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .harness import (
    ConfigError,
    RunConfig,
    build_term,
    run_coarsening,
    run_compare,
    run_convergence_study,
    run_violation_demo,
    tableau_info,
)
from .integrator import StepSizeError
from .schemes import BUILTIN_SCHEMES, TableauError

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _pair(text: str) -> list:
    """SCHEME:TAU or SCHEME:TAU:N_PER_AXIS."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected SCHEME:TAU[:N], got {text!r}")
    try:
        pair: list = [parts[0], float(parts[1])]
        if len(parts) == 3:
            pair.append(int(parts[2]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected SCHEME:TAU[:N], got {text!r}")
    return pair


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", action="append", metavar="NAME",
                   help="scheme name; repeat for several (default depends on subcommand)")
    p.add_argument("--grid", type=int, metavar="N", dest="n_per_axis",
                   help="grid points per axis (h = 1/N)")
    p.add_argument("--dim", type=int, choices=(1, 2, 3), help="spatial dimension")
    p.add_argument("--eps2", type=float, help="diffusion coefficient")
    p.add_argument("--term", choices=("cubic", "flory"), help="reaction term")
    p.add_argument("--theta", type=float, help="log-well temperature parameter")
    p.add_argument("--theta-c", type=float, dest="theta_c",
                   help="log-well critical temperature")
    p.add_argument("--tau", type=float, help="time step size")
    p.add_argument("--t-end", type=float, dest="t_end", help="final time")
    p.add_argument("--seed", type=int, help="RNG seed for initial data")
    p.add_argument("--out", help="output directory for artifacts")
    p.add_argument("--record-every", type=int, dest="record_every",
                   help="sample diagnostics every k-th step")
    p.add_argument("--config", metavar="JSON", help="JSON config file; flags override it")
    p.add_argument("--enforce-mbp", action=argparse.BooleanOptionalAction,
                   dest="enforce_mbp", default=None,
                   help="refuse configurations outside the bound-preserving regime")
    p.add_argument("--ic", dest="ic_kind", choices=("random", "smooth", "constant", "file"),
                   help="initial condition kind")
    p.add_argument("--ic-lo", type=float, dest="ic_lo", help="random IC lower bound")
    p.add_argument("--ic-hi", type=float, dest="ic_hi", help="random IC upper bound")
    p.add_argument("--ic-value", type=float, dest="ic_value", help="constant IC value")
    p.add_argument("--ic-path", dest="ic_path", help="raw float64 file for ic=file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifrk",
        description="Bound-preserving integrating factor Runge-Kutta experiments "
                    "for semilinear parabolic systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("converge", help="error ladder against a fine-step benchmark")
    _add_common(p)
    p.add_argument("--tau-ladder", type=_float_list, dest="tau_ladder",
                   metavar="T1,T2,...", help="comma-separated step sizes")
    p.add_argument("--benchmark-tau", type=float, dest="benchmark_tau",
                   help="benchmark step (default: smallest ladder entry / 10)")
    p.add_argument("--benchmark-scheme", dest="benchmark_scheme",
                   help="benchmark scheme (default IFRK4)")
    p.add_argument("--fit-window", type=int, dest="fit_window",
                   help="number of smallest usable steps in the order fit")

    p = sub.add_parser("coarsen", help="long-time run with series and snapshots")
    _add_common(p)
    p.add_argument("--snapshot-times", type=_float_list, dest="snapshot_times",
                   metavar="T1,T2,...", help="times to dump field snapshots")
    p.add_argument("--snapshot-format", choices=("raw", "csv"), dest="snapshot_format",
                   help="snapshot payload format (default raw float64)")

    p = sub.add_parser("violate", help="run a scheme regardless of admissibility")
    _add_common(p)

    p = sub.add_parser("compare", help="two (scheme, tau) runs on one config")
    _add_common(p)
    p.add_argument("--pair", action="append", type=_pair, metavar="SCHEME:TAU[:N]",
                   help="one comparison slot; give exactly twice")

    p = sub.add_parser("tableau-info", help="print scheme coefficients and constants")
    _add_common(p)
    p.add_argument("name", nargs="?", help="scheme name (default: all builtins)")

    return parser


_EXPERIMENT_BY_COMMAND = {
    "converge": "converge",
    "coarsen": "coarsen",
    "violate": "violation_demo",
    "compare": "compare",
    "tableau-info": "tableau_info",
}

_DEFAULT_SCHEMES = {
    "converge": ("IF1", "IFRK2", "IFRK3", "IFRK4"),
    "coarsen": ("IFRK4",),
    "violate": ("IFRK3_SHUOSHER",),
}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        cfg = RunConfig.from_json(args.config)
    else:
        cfg = RunConfig()
    overrides = {}
    for key in RunConfig.__dataclass_fields__:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.scheme:
        overrides["schemes"] = tuple(args.scheme)
    if getattr(args, "pair", None):
        overrides["pairs"] = tuple(tuple(p) for p in args.pair)
    overrides["experiment"] = _EXPERIMENT_BY_COMMAND[args.command]
    if "schemes" not in overrides and not args.config:
        default = _DEFAULT_SCHEMES.get(args.command)
        if default:
            overrides["schemes"] = default
    if args.command == "converge" and "ic_kind" not in overrides and not args.config:
        overrides["ic_kind"] = "smooth"
    return replace(cfg, **overrides)


def _print_convergence(result: dict) -> None:
    for name in sorted(result["orders"]):
        entry = result["orders"][name]
        print(
            f"{name}: fitted order {entry['fitted_order']:.3f} "
            f"(expected {entry['expected_order']}, {entry['points_used']} points)"
        )
    if result["out"]:
        print(f"artifacts in {result['out']}")


def _print_series_results(results: dict, out: str | None) -> None:
    for name in sorted(results):
        entry = results[name]
        status = entry["status"]
        first = entry.get("first_violation_time")
        line = f"{name}: {status}"
        if "t_final" in entry:
            line += f", t_final = {entry['t_final']:g}, sup = {entry['sup_final']:.6g}"
        line += (
            f", first violation at t = {first:g}" if first is not None else ", no violations"
        )
        print(line)
    if out:
        print(f"artifacts in {out}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "tableau-info":
            cfg = _config_from_args(args)
            term = build_term(cfg) if (args.config or args.term) else None
            names = [args.name] if args.name else list(BUILTIN_SCHEMES)
            infos = [tableau_info(name, term) for name in names]
            print(json.dumps(infos if len(infos) > 1 else infos[0], indent=2))
            return EXIT_OK

        cfg = _config_from_args(args)
        if args.command == "converge":
            result = run_convergence_study(cfg)
            _print_convergence(result)
            return EXIT_OK
        if args.command == "coarsen":
            result = run_coarsening(cfg)
            _print_series_results(result["results"], result["out"])
            blew = any(e["status"] == "blow_up" for e in result["results"].values())
            return EXIT_BLOWUP if blew else EXIT_OK
        if args.command == "violate":
            result = run_violation_demo(cfg)
            _print_series_results(result["results"], result["out"])
            return EXIT_OK
        if args.command == "compare":
            result = run_compare(cfg)
            report = result["report"]
            first, second = report["pairs"]
            print(
                f"{second['scheme']}(tau={second['tau']:g}) vs "
                f"{first['scheme']}(tau={first['tau']:g}): "
                f"wall ratio {report['wall_ratio_second_over_first']:.4f}, "
                f"final sup distance {report['distance_inf']:.3e}"
            )
            if result["out"]:
                print(f"artifacts in {result['out']}")
            blew = any(e["status"] == "blow_up" for e in report["pairs"])
            return EXIT_BLOWUP if blew else EXIT_OK
        parser.error(f"unknown command {args.command!r}")
    except (ConfigError, TableauError, StepSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

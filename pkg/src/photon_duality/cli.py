"""Command-line interface.

Subcommands:
  compute     analytic (V, D, C) triples only, no simulation
  fringes     fringe-scan data dump (exact with --shots 0, else Monte Carlo)
  experiment  full pipeline: fringe fit + arm blocking + tomography
  sphere      unit-sphere points (V, D, C) per scenario

Scenarios come from --config FILE (JSON array) or --defaults (the seven
built-in states).  --seed reseeds every scenario from one master seed,
--shots overrides the per-scenario budget.  Output goes to --out or stdout
as --format csv|json.  Exit codes: 0 success, 1 validation error, 2 I/O
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .interferometer import fringe_scan, phase_grid, sample_fringe_scan
from .metrics import vdc_triple
from .pipeline import emit_report, run_pipeline, sphere_points
from .scenarios import (
    MIN_SHOTS,
    ScenarioError,
    default_scenarios,
    load_scenarios,
    override_shots,
    reseed,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photon-duality",
        description="Two-path single-photon duality simulator and analyzer",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("compute", "analytic triples only"),
        ("fringes", "dump fringe scans"),
        ("experiment", "run the full simulated experiment"),
        ("sphere", "emit unit-sphere points"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="FILE", help="scenario file (JSON array)")
        p.add_argument("--defaults", action="store_true", help="use the built-in scenarios")
        p.add_argument("--shots", type=int, default=None, help="override shots per scenario")
        p.add_argument("--seed", type=int, default=None, help="master seed overriding scenario seeds")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="FILE", default=None, help="output path (default stdout)")
        if name == "sphere":
            p.add_argument(
                "--analytic",
                action="store_true",
                help="emit exact analytic points instead of simulating",
            )
    return parser


def _load(args) -> list:
    if args.defaults and args.config:
        raise ScenarioError("pass either --config or --defaults, not both")
    if args.defaults:
        scenarios = default_scenarios()
    elif args.config:
        scenarios = load_scenarios(args.config)
    else:
        raise ScenarioError("no scenarios: pass --config FILE or --defaults")
    if args.seed is not None:
        scenarios = reseed(scenarios, args.seed)
    allow_zero_shots = args.command == "fringes"
    if args.shots is not None and not (allow_zero_shots and args.shots == 0):
        if args.shots < MIN_SHOTS:
            raise ScenarioError(f"--shots must be >= {MIN_SHOTS}, got {args.shots}")
        scenarios = override_shots(scenarios, args.shots)
    return scenarios


def _write(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv_table(header, rows) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cmd_compute(args, scenarios) -> None:
    triples = [(sc, vdc_triple(sc.to_state())) for sc in scenarios]
    if args.format == "csv":
        rows = [
            [sc.name, _fmt(t.visibility), _fmt(t.distinguishability), _fmt(t.concurrence), _fmt(t.residual)]
            for sc, t in triples
        ]
        text = _csv_table(["name", "V", "D", "C", "residual"], rows)
    else:
        text = json.dumps(
            [
                {
                    "name": sc.name,
                    "visibility": t.visibility,
                    "distinguishability": t.distinguishability,
                    "concurrence": t.concurrence,
                    "gamma": [t.gamma.real, t.gamma.imag],
                    "residual": t.residual,
                }
                for sc, t in triples
            ],
            indent=2,
        ) + "\n"
    _write(text, args.out)


def _cmd_fringes(args, scenarios) -> None:
    from .pipeline import STAGE_FRINGE
    from .seeding import derive_seed, make_rng

    exact = args.shots == 0
    scans = []
    for sc in scenarios:
        state = sc.to_state()
        grid = phase_grid(sc.phase_points)
        if exact:
            scan = fringe_scan(state, grid)
        else:
            rng = make_rng(derive_seed(sc.seed, STAGE_FRINGE))
            scan = sample_fringe_scan(state, sc.shots, rng, grid)
        scans.append((sc, scan))
    if args.format == "csv":
        rows = [
            [sc.name, _fmt(phi), _fmt(p)]
            for sc, scan in scans
            for phi, p in zip(scan.phases, scan.probabilities)
        ]
        text = _csv_table(["name", "phi", "p"], rows)
    else:
        text = json.dumps(
            [
                {
                    "name": sc.name,
                    "noisy": scan.noisy,
                    "shots_per_point": scan.shots_per_point,
                    "points": [[float(phi), float(p)] for phi, p in zip(scan.phases, scan.probabilities)],
                }
                for sc, scan in scans
            ],
            indent=2,
        ) + "\n"
    _write(text, args.out)


def _cmd_experiment(args, scenarios) -> None:
    reports = [run_pipeline(sc) for sc in scenarios]
    emit_report(reports, fmt=args.format, out=args.out)


def _cmd_sphere(args, scenarios) -> None:
    if args.analytic:
        named_points = [
            (sc.name, vdc_triple(sc.to_state()).as_tuple()) for sc in scenarios
        ]
    else:
        reports = [run_pipeline(sc) for sc in scenarios]
        named_points = [
            (r.name, p) for r, p in zip(reports, sphere_points(reports))
        ]
    if args.format == "csv":
        rows = [[name, _fmt(x), _fmt(y), _fmt(z)] for name, (x, y, z) in named_points]
        text = _csv_table(["name", "x", "y", "z"], rows)
    else:
        text = json.dumps(
            [{"name": name, "point": list(point)} for name, point in named_points],
            indent=2,
        ) + "\n"
    _write(text, args.out)


_COMMANDS = {
    "compute": _cmd_compute,
    "fringes": _cmd_fringes,
    "experiment": _cmd_experiment,
    "sphere": _cmd_sphere,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenarios = _load(args)
        _COMMANDS[args.command](args, scenarios)
    except (ScenarioError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

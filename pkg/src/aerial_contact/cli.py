"""Command line entry point.

    aerial-contact simulate CONFIG [--out DIR] [--scenario KIND]
    aerial-contact statics-sweep CONFIG [--out DIR]
    aerial-contact workspace CONFIG [--out DIR]

Exit codes: 0 success, 2 invalid configuration, 3 model-validity abort.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .harness import (
    ConfigError,
    dump_config,
    load_config,
    run_scenario,
    write_summary,
    write_sweep,
    write_trace,
    write_workspace,
)
from .harness.config import SCENARIO_KINDS
from .kinematics import workspace_sample
from .statics import thrust_sweep

log = logging.getLogger("aerial_contact")

EXIT_OK, EXIT_CONFIG, EXIT_ABORT = 0, 2, 3


def _statics(cfg, out: Path) -> int:
    table = thrust_sweep(
        cfg.sweep.forces(), cfg.sweep.mu, cfg.vehicle, cfg.contact, cfg.limits.T_max
    )
    write_sweep(table, out / "sweep.csv")
    log.info("wrote %d sweep points to %s", len(table), out / "sweep.csv")
    return EXIT_OK


def _workspace(cfg, out: Path) -> int:
    ws = cfg.workspace
    cloud = workspace_sample(cfg.links, cfg.joint_limits, ws.resolution, ws.orientation, ws.orientation_tol)
    write_workspace(cloud, out / "workspace.csv")
    log.info("wrote %d workspace points to %s", len(cloud), out / "workspace.csv")
    return EXIT_OK


def _simulate(cfg, out: Path) -> int:
    if cfg.kind == "statics-sweep":
        return _statics(cfg, out)
    if cfg.kind == "workspace-dump":
        return _workspace(cfg, out)
    trace, summary = run_scenario(cfg)
    write_trace(trace, out / "trace.csv")
    write_summary(summary, out / "summary.txt")
    (out / "effective_config.toml").write_text(dump_config(cfg))
    log.info("wrote %d trace rows to %s", len(trace), out / "trace.csv")
    if trace.aborted:
        log.error("simulation aborted: %s", trace.aborted)
        return EXIT_ABORT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aerial-contact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a closed-loop scenario")
    sim.add_argument("config", type=Path)
    sim.add_argument("--out", type=Path, default=Path("."))
    sim.add_argument("--scenario", choices=SCENARIO_KINDS, help="override the scenario kind")

    for name, help_text in (
        ("statics-sweep", "thrust vs contact force equilibrium table"),
        ("workspace", "sampled manipulator workspace point cloud"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path)
        p.add_argument("--out", type=Path, default=Path("."))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if getattr(args, "scenario", None):
            cfg = dataclasses.replace(cfg, kind=args.scenario)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    args.out.mkdir(parents=True, exist_ok=True)
    if args.command == "simulate":
        return _simulate(cfg, args.out)
    if args.command == "statics-sweep":
        return _statics(cfg, args.out)
    return _workspace(cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 success, 1 invalid configuration or map, 2 a run failed,
64 bad command-line usage.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .engine import load_scenario, run_many
from .errors import ConfigError, MapError, SimulationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="urbandtn", description="Headless urban delay-tolerant network simulator.")
    p.add_argument("--config", required=True, help="settings file (sim.config)")
    p.add_argument("--seed", type=int, default=0, help="base seed; run k uses seed + k")
    p.add_argument("--runs", type=int, help="override No_of_Simulations")
    p.add_argument("--report-dir", help="override Report_Directory")
    p.add_argument("--validate-map", action="store_true",
                   help="parse and normalize the map, print graph stats, do not simulate")
    p.add_argument("--quiet", action="store_true", help="only print errors")
    return p


def cli_main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.runs is not None and args.runs < 1:
        print("urbandtn: error: --runs must be >= 1", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        scenario = load_scenario(args.config, args.report_dir, args.runs)
    except (ConfigError, MapError, OSError) as exc:
        print(f"urbandtn: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.validate_map:
        stats = scenario.graph.stats()
        print(f"nodes: {len(scenario.map.nodes)}")
        print(f"ways: {len(scenario.map.ways)}")
        print(f"dropped ways: {scenario.map.dropped_ways}")
        print(f"vertices: {stats['vertices']}")
        print(f"edges: {stats['edges']}")
        print(f"total km: {stats['total_km']:.6f}")
        return EXIT_OK

    try:
        batch = run_many(scenario, base_seed=args.seed)
    except SimulationError as exc:
        print(f"urbandtn: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if not args.quiet:
        for s in batch.summaries:
            latency = "-" if s.mean_delivery_latency_h is None else f"{s.mean_delivery_latency_h:.4f} h"
            print(f"run {s.run_index}: events {s.events_generated} delivered {s.events_delivered} "
                  f"ratio {s.delivery_ratio:.3f} transfers {s.total_transfers} latency {latency}")
        print(f"reports: {scenario.general.report_directory}")
    for k, err in batch.failures:
        print(f"urbandtn: run {k} failed: {err}", file=sys.stderr)
    return EXIT_OK if batch.ok else EXIT_RUNTIME


def main() -> None:
    sys.exit(cli_main())

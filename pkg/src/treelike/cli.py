"""Command line entry point: ``treelike <command> INPUT... [flags]``."""
from __future__ import annotations

import argparse
import sys

from .report import ANALYSES, ConfigError, RunConfig, run_pipeline

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3

COMMANDS = {
    "stats": ("stats",),
    "layering": ("stats", "layering"),
    "trees": ("layering", "trees"),
    "distortion": ("layering", "trees", "distortion"),
    "hyper": ("hyperbolicity",),
    "tb": ("layering", "tb"),
    "estimate": ("stats", "estimate"),
    "report": ANALYSES,
}


def _source(text: str):
    if text in ("min-id", "random"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected min-id, random or a vertex id") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treelike", description="Tree-likeness measurements of graphs.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("inputs", nargs="+", help="edge-list files")
    p.add_argument("--source", type=_source, default="min-id",
                   help="start vertex for the layering: min-id, random (uses --seed) or an id")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample", type=int, default=None,
                   help="sample K vertex pairs (distortion) and K quadruplets (histogram)")
    p.add_argument("--budget", type=float, default=None, help="time budget in seconds for hyperbolicity")
    p.add_argument("--max-component", type=int, default=20000,
                   help="largest biconnected component searched exactly")
    p.add_argument("--exhaustive", action="store_true", help="enumerate every quadruplet")
    p.add_argument("--histogram", action="store_true", help="also emit the quadruplet delta histogram")
    p.add_argument("--max-scans", type=int, default=8)
    p.add_argument("--analyses", default=None,
                   help="comma-separated subset for the report command, e.g. stats,estimate")
    p.add_argument("--out", default="treelike-out")
    p.add_argument("--cache", default=None, help="cache directory (default OUT/.cache)")
    p.add_argument("--format", dest="fmt", choices=("csv", "markdown"), default="csv")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    analyses = COMMANDS[args.command]
    if args.analyses:
        if args.command != "report":
            raise ConfigError("--analyses only applies to the report command")
        analyses = tuple(a.strip() for a in args.analyses.split(",") if a.strip())
    return RunConfig(
        inputs=tuple(args.inputs),
        analyses=analyses,
        source=args.source,
        seed=args.seed,
        budget_seconds=args.budget,
        max_component_size=args.max_component,
        pair_sample=args.sample,
        quad_sample=args.sample,
        histogram=args.histogram,
        exhaustive_hyperbolicity=args.exhaustive,
        max_scans=args.max_scans,
        out_dir=args.out,
        fmt=args.fmt,
        cache_dir=args.cache,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        bundle = run_pipeline(config_from_args(args))
    except ConfigError as exc:
        print(f"treelike: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for name in sorted(bundle.tables):
        print(bundle.out_dir / f"{name}.csv")
    if bundle.partial:
        print("treelike: some analyses stopped at their budget; see manifest.json", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Main module for curi package."""

import argparse
import json
import logging
import sys
from pathlib import Path

from curi import Curi, __version__
from curi.exceptions import CuriError
from curi.objects.config import RunConfig
from curi.objects.split import SPLIT_KINDS
from curi.pipeline import MODES, Pipeline

logger = logging.getLogger("curi")


def _pipeline(args: argparse.Namespace) -> Pipeline:
    split = getattr(args, "split", None)
    overrides = {"seed": args.seed, "out": args.out, "split_kinds": [split] if split is not None else None}
    if args.config is not None:
        config = RunConfig.from_file(args.config, **overrides)
    else:
        config = RunConfig(**{key: value for key, value in overrides.items() if value is not None})
    logger.debug("Config: %s", config.model_dump_json())
    return Pipeline(Curi(config))


def _modes(args: argparse.Namespace, pipeline: Pipeline) -> list:
    return [args.negatives] if args.negatives is not None else [pipeline.curi.config.negatives]


def command_sample_concepts(args: argparse.Namespace) -> None:
    """Sample raw concepts."""
    logger.debug("Starting command: sample-concepts with args: %s", args)
    _pipeline(args).cmd_sample_concepts()


def command_build_pool(args: argparse.Namespace) -> None:
    """Build the scene pool."""
    logger.debug("Starting command: build-pool with args: %s", args)
    _pipeline(args).cmd_build_pool()


def command_filter(args: argparse.Namespace) -> None:
    """Filter concepts into the hypothesis space."""
    logger.debug("Starting command: filter with args: %s", args)
    pipeline = _pipeline(args)
    pipeline.cmd_filter()
    stats = pipeline.curi.filter.synonym_clusters(pipeline.load_space())
    logger.info(stats.model_dump_json())


def command_split(args: argparse.Namespace) -> None:
    """Build splits."""
    logger.debug("Starting command: split with args: %s", args)
    pipeline = _pipeline(args)
    for kind in pipeline.curi.config.split_kinds:
        pipeline.cmd_split(kind=kind)


def command_episodes(args: argparse.Namespace) -> None:
    """Build episodes."""
    logger.debug("Starting command: episodes with args: %s", args)
    pipeline = _pipeline(args)
    for kind in pipeline.curi.config.split_kinds:
        for mode in _modes(args, pipeline):
            pipeline.cmd_episodes(kind=kind, mode=mode)


def command_compgap(args: argparse.Namespace) -> None:
    """Measure the compositionality gap."""
    logger.debug("Starting command: compgap with args: %s", args)
    pipeline = _pipeline(args)
    pipeline.cmd_map_pool()
    for kind in pipeline.curi.config.split_kinds:
        for mode in _modes(args, pipeline):
            report = pipeline.cmd_compgap(kind=kind, mode=mode)
            logger.info(report.model_dump_json(indent=2, by_alias=True))


def command_all(args: argparse.Namespace) -> None:
    """Run the whole pipeline."""
    logger.debug("Starting command: all with args: %s", args)
    pipeline = _pipeline(args)
    modes = [args.negatives] if args.negatives is not None else list(MODES)
    pipeline.cmd_all(modes)
    logger.info("Saved to %s", pipeline.out)


def command_audit(args: argparse.Namespace) -> None:
    """Audit stored artifacts."""
    logger.debug("Starting command: audit with args: %s", args)
    report = _pipeline(args).audit()
    logger.info(report.model_dump_json(indent=2))
    if not report.ok:
        sys.exit(1)


def main() -> None:
    """Main function for curi package."""
    parser = argparse.ArgumentParser(
        description="generate the CURI benchmark and measure its compositionality gap",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--debug", help="enable debug logging", action="store_true")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help="master seed (default: from config)", default=None, type=int)
    common.add_argument("--out", help="output directory (default: from config)", default=None, type=Path)
    common.add_argument("--config", help="key = value config file", default=None, type=Path)

    selection = argparse.ArgumentParser(add_help=False)
    selection.add_argument("--split", help="split kind (default: all configured)", default=None, choices=SPLIT_KINDS)
    selection.add_argument("--negatives", help="negatives mode (default: from config)", default=None, choices=MODES)

    subparsers = parser.add_subparsers(title="commands")

    parser_concepts = subparsers.add_parser("sample-concepts", help="sample raw concepts", parents=[common])
    parser_concepts.set_defaults(func=command_sample_concepts)

    parser_pool = subparsers.add_parser("build-pool", help="build the scene pool", parents=[common])
    parser_pool.set_defaults(func=command_build_pool)

    parser_filter = subparsers.add_parser("filter", help="filter concepts into the hypothesis space", parents=[common])
    parser_filter.set_defaults(func=command_filter)

    parser_split = subparsers.add_parser("split", help="build splits", parents=[common, selection])
    parser_split.set_defaults(func=command_split)

    parser_episodes = subparsers.add_parser("episodes", help="build episodes", parents=[common, selection])
    parser_episodes.set_defaults(func=command_episodes)

    parser_compgap = subparsers.add_parser(
        "compgap",
        help="measure the compositionality gap",
        parents=[common, selection],
    )
    parser_compgap.set_defaults(func=command_compgap)

    parser_all = subparsers.add_parser("all", help="run every stage and write summary.csv", parents=[common, selection])
    parser_all.set_defaults(func=command_all)

    parser_audit = subparsers.add_parser("audit", help="audit stored artifacts", parents=[common])
    parser_audit.set_defaults(func=command_audit)

    args = parser.parse_args()

    logging.basicConfig(level=logging.DEBUG if args.debug else logging.INFO, format="%(message)s")

    if not hasattr(args, "func"):
        parser.print_help()
        return
    try:
        args.func(args)
    except CuriError as e:
        logger.debug("Command failed", exc_info=True)
        print(json.dumps({"error": type(e).__name__, "message": e.message}), file=sys.stderr)  # noqa: T201
        sys.exit(2)


if __name__ == "__main__":
    main()

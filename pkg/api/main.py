"""Command-line entry point for the enrichment workbench."""
import argparse
import json
import logging
import sys
from typing import List, Optional

from api.exceptions import EXIT_OK, EXIT_USAGE_ERROR, handle_exception
from api.routes import charts, classification, enrichments, strata
from services.settings import DEFAULT_SETTINGS, get_settings

logger = logging.getLogger(__name__)

VERSION = "1.0.0"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="ground-set size (default 3)")
    common.add_argument("--max-level", type=int, default=None, help="deepest enrichment level")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text", dest="output_format")
    common.add_argument("--output", default=None, help="write the result to a file instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")
    common.add_argument("--max-arity", type=int, default=None, help="largest tuple size scanned for incidences")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="enrichment-workbench",
        description="Classify enrichments of configuration spaces of three points and verify their charts",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for family in (enrichments, classification, strata, charts):
        family.register(subparsers, [common])
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and render one command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE_ERROR

    _configure_logging(args.verbose)
    try:
        settings = get_settings(
            # the saturation cap never drops below the default
            max_level=max(args.max_level, DEFAULT_SETTINGS.max_level) if args.max_level else None,
            incidence_max_arity=args.max_arity,
            seed=args.seed,
        )
        result = args.handler(args, settings)
        rendered = result.render(args.output_format, args.command)
    except Exception as e:
        payload = handle_exception(e)
        sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")
        return payload["exit_code"]

    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(rendered)
        logger.info(f"Wrote {args.command} output to {args.output}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

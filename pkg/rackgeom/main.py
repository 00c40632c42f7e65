import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from rackgeom import __version__
from rackgeom.api.commands import add_subcommands
from rackgeom.core.config import settings
from rackgeom.core.errors import RackGeomError
from rackgeom.core.logging_config import configure_logging
from rackgeom.models.report import Report

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rackgeom",
        description="Geometry and cohomology of finite racks and free quandles",
    )
    parser.add_argument("--version", action="version", version=f"rackgeom {__version__}")
    parser.add_argument("--json", metavar="PATH", help="write the report to PATH instead of stdout")
    parser.add_argument("--cap", type=int, help="override the group order / free quandle element cap")
    parser.add_argument("--seed", type=int, help="run the randomized property checks of amenable-check with this seed")
    parser.add_argument("--timing", action="store_true", help="add wall-clock timings to the report")
    parser.add_argument(
        "--log-level",
        default=settings.LOG_LEVEL,
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    parser.add_argument("--log-json", action="store_true", default=settings.LOG_JSON)
    add_subcommands(parser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    args.fq_cap = args.cap

    command = args.command if args.command != "fq" else f"fq {args.fq_command}"
    started = time.perf_counter()
    try:
        result = args.handler(args)
    except RackGeomError as e:
        logger.debug(f"{command} failed", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    elapsed = time.perf_counter() - started

    if isinstance(result, str):
        output = result
    else:
        descriptor, payload = result
        if args.seed is not None:
            descriptor = {**descriptor, "seed": args.seed}
        report = Report(
            version=__version__,
            command=command,
            input=descriptor,
            payload=payload,
            timing={"total_seconds": round(elapsed, 6)} if args.timing else None,
        )
        output = json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2) + "\n"

    if args.json:
        Path(args.json).write_text(output)
        logger.info(f"Wrote {command} report to {args.json}")
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())

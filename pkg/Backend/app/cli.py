"""Command-line bench: ``python -m app.cli --alg improved --stream appendix_hard:l=30``."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from app.core.config import get_settings
from app.core.errors import ConfigError
from app.models.harness import AlgorithmName, HarnessConfig, OutputFormat
from app.models.interval import SplitRule
from app.services import bench_harness

logger = logging.getLogger("app.cli")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="interval-bench",
        description="Run a sliding-window interval selection algorithm against the exact oracle.",
    )
    parser.add_argument("--alg", required=True, choices=[name.value for name in AlgorithmName])
    parser.add_argument("--window", type=int, default=settings.default_window, help="window length L")
    parser.add_argument("--beta", type=float, default=None, help="smooth histogram parameter (default from settings)")
    parser.add_argument("--delta", type=float, default=settings.default_delta, help="improved algorithm slack")
    parser.add_argument("--stream", required=True, help="stream file path or generator spec such as random_unit:n=1000")
    parser.add_argument(
        "--oracle",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="track the exact window optimum (default: on unless the window is very large)",
    )
    parser.add_argument("--sample-every", type=int, default=settings.default_sample_every)
    parser.add_argument("--out", type=Path, default=None, help="metrics file (default: stdout)")
    parser.add_argument("--format", choices=[item.value for item in OutputFormat], default=OutputFormat.csv.value)
    parser.add_argument(
        "--split-rule",
        choices=[rule.value for rule in SplitRule],
        default=settings.cp_split_rule,
    )
    parser.add_argument(
        "--checks",
        action=argparse.BooleanOptionalAction,
        default=settings.check_invariants,
        help="run engine self-checks after every step",
    )
    parser.add_argument("--record", action="store_true", help="store the run summary in the run ledger")
    parser.add_argument("--log-level", default=settings.log_level)
    return parser


def config_from_args(args: argparse.Namespace) -> HarnessConfig:
    values = {
        "algorithm": args.alg,
        "window": args.window,
        "delta": args.delta,
        "stream": args.stream,
        "oracle_enabled": args.oracle,
        "sample_every": args.sample_every,
        "output_path": args.out,
        "output_format": args.format,
        "split_rule": args.split_rule,
        "check_invariants": args.checks,
    }
    if args.beta is not None:
        values["beta"] = args.beta
    try:
        config = HarnessConfig(**values)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc.errors(include_url=False)}") from exc
    return config


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = config_from_args(args)
    except ConfigError as exc:
        logger.error(exc.message)
        return exc.exit_code

    status, result = bench_harness.run(config)
    if status == 0 and result is not None and args.record:
        from app.db.session import init_db, session_scope
        from app.services.run_ledger import get_run_ledger_service

        init_db()
        with session_scope() as session:
            record = get_run_ledger_service().record(session, result)
            logger.info("recorded run %s", record.run_id)
    return status


if __name__ == "__main__":
    sys.exit(main())

import argparse
import asyncio
import logging
import sys
from typing import Optional, Sequence

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import AnalysisError, ExitCode, JobInputError
from app.core.logging_config import configure_logging
from app.services.job import JobService
from app.services.kodaira import KodairaService, corrupted_table
from app.services.render import render_report
from app.services.selftest import SelftestService

logger = logging.getLogger(__name__)

COMMANDS = ("classify", "resolve", "selftest")
FAULTS = ("kodaira-table",)


def build_parser(settings: Settings = default_settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weierstrass-lab",
        description=f"{settings.APP_NAME}: resolve isolated (4,6,12) fibers of Weierstrass models",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--input", metavar="PATH", help="JSON job file (classify, resolve)")
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of the text summary")
    parser.add_argument("--recursion-limit", type=int, metavar="N", help="maximum blow-up depth")
    parser.add_argument("--print-kodaira-table", action="store_true", help="dump the Kodaira table and exit")
    parser.add_argument("--seed", type=int, help="selftest seed")
    parser.add_argument("--inject-fault", choices=FAULTS, help="corrupt a table before running (DEBUG only)")
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.VERSION}")
    return parser


def _kodaira_service(args: argparse.Namespace, settings: Settings) -> KodairaService:
    if args.inject_fault is None:
        return KodairaService()
    if not settings.DEBUG:
        raise JobInputError("--inject-fault is only available with DEBUG=true")
    logger.warning("Injecting fault %s", args.inject_fault)
    return KodairaService(corrupted_table())


def _run_selftest(args: argparse.Namespace, settings: Settings, kodaira: KodairaService) -> int:
    result = SelftestService(settings, kodaira, seed=args.seed).run()
    print(result.summary())
    failure = result.first_failure
    if failure is not None:
        print(f"first failing check: {failure.name}", file=sys.stderr)
        return int(ExitCode.INTERNAL)
    return int(ExitCode.OK)


def _run_job(args: argparse.Namespace, settings: Settings, kodaira: KodairaService) -> int:
    if not args.input:
        raise JobInputError(f"{args.command} needs --input <path>")
    if args.recursion_limit is not None and args.recursion_limit < 1:
        raise JobInputError(f"--recursion-limit must be positive, got {args.recursion_limit}")
    service = JobService(settings, kodaira)
    spec = service.load_job(args.input)
    report = asyncio.run(service.run(args.command, spec, args.recursion_limit))
    print(report.to_json() if args.json else render_report(report))
    return report.exit_code


def main(argv: Optional[Sequence[str]] = None, settings: Settings = default_settings) -> int:
    """Command-line entry point; returns the process exit code"""
    configure_logging(settings)
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(ExitCode.OK) if exc.code in (0, None) else int(ExitCode.INPUT_ERROR)

    try:
        kodaira = _kodaira_service(args, settings)
        if args.print_kodaira_table:
            print(kodaira.render_table())
            if args.command is None:
                return int(ExitCode.OK)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return int(ExitCode.INPUT_ERROR)
        if args.command == "selftest":
            return _run_selftest(args, settings, kodaira)
        return _run_job(args, settings, kodaira)
    except AnalysisError as exc:
        print(f"error: {exc.kind}: {exc.detail}", file=sys.stderr)
        for key, value in exc.diagnostics.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return int(exc.exit_code)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

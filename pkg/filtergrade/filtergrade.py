#
# filtergrade.py
#
# Command-line runner for filtergrade session files: parses each session,
# executes its commands, and writes the resulting reports.
#
# Copyright 2024, Paul McGuire
#
import argparse
import logging
import sys
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler

from filtergrade.commands import RunConfig, run
from filtergrade.errors import CommandError, SessionSyntaxError
from filtergrade.reporting import FORMATS, InvariantReport, emit
from filtergrade.session_reading import SessionSource

logger = logging.getLogger("filtergrade")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

DEMO_SESSIONS = ["example_att.demo", "fgrade_fixtures.demo", "local_cohomology.demo"]

_EXTENSIONS = {"text": "txt", "json": "json", "tsv": "tsv"}


def make_argument_parser() -> argparse.ArgumentParser:
    epilog_notes = """
    Session files hold one ring declaration, ideal/module/sequence bindings,
    and commands, each statement terminated by ';'. Files ending in '.gz'
    are read through gzip.

    Exit status is 0 when every report is PASS or INFO, 1 when any
    verification reports FAIL, and 2 on a syntax error, an unreadable file,
    or a command that raises an error.
    """

    # When changing these arguments, update relevant sections in README.md
    parser = argparse.ArgumentParser(prog="filtergrade", epilog=epilog_notes)
    parser.add_argument("sessions", nargs="*", help="session files (.fg or .fg.gz) to run")
    parser.add_argument(
        "--format", "-f",
        choices=FORMATS,
        default="text",
        help="report format (default: text); tsv covers cohomology tables only",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for randomized fixtures used by triple-check (default: 0)",
    )
    parser.add_argument(
        "--max-candidates",
        type=int,
        default=10_000,
        help="candidates tried per step when searching for filter regular sequences (default: 10000)",
    )
    parser.add_argument(
        "--window-margin-extra",
        type=int,
        default=0,
        help="extra margin added to every windowed Čech computation (default: 0)",
    )
    parser.add_argument(
        "--out", "-o",
        help="directory for per-command report files, instead of stdout",
    )
    parser.add_argument(
        "--width", "-w",
        type=int,
        default=None,
        help="console width for text output",
    )
    parser.add_argument(
        "--encoding", "-enc",
        type=str,
        default="utf-8",
        help="encoding to use when reading session files (default: utf-8)",
    )
    parser.add_argument(
        "--verbose", "-v",
        action="count",
        default=0,
        help="log progress to stderr (-v for INFO, -vv for DEBUG)",
    )
    parser.add_argument("--demo", action="store_true", help="run the built-in demo sessions")

    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=False)],
        force=True,
    )


class FilterGradeApplication:
    def __init__(self, config: argparse.Namespace):
        self.config = config
        self.session_names = config.sessions
        self.format = config.format
        self.out_dir = Path(config.out) if config.out else None
        self.width = config.width
        self.encoding = config.encoding
        self.run_config = RunConfig(
            seed=config.seed,
            max_candidates=config.max_candidates,
            margin_extra=config.window_margin_extra,
        )
        if self.run_config.max_candidates < 1:
            raise ValueError("--max-candidates must be positive")
        if self.run_config.margin_extra < 0:
            raise ValueError("--window-margin-extra must be non-negative")

    def run(self) -> int:
        """Run every session in order; returns the process exit status."""
        status = EXIT_OK
        for session_name in self.session_names:
            try:
                source = SessionSource.for_name(session_name, self.encoding)
                session = source.parse()
                reports = run(session, self.run_config)
            except (SessionSyntaxError, CommandError) as exc:
                logger.error("%s: %s", session_name, exc)
                return EXIT_ERROR
            except (OSError, ValueError) as exc:
                logger.error("cannot read session %s: %s", session_name, exc)
                return EXIT_ERROR

            self._write_reports(source, reports)
            if any(report.failed for report in reports):
                status = EXIT_FAIL
        return status

    def _write_reports(self, source: SessionSource, reports: list[InvariantReport]) -> None:
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            prefix = f"{source.stem}_" if len(self.session_names) > 1 else ""
            for report in reports:
                body = emit(report, self.format, width=self.width)
                if not body:
                    continue
                file_name = f"{prefix}{report.index:03d}_{report.command}.{_EXTENSIONS[self.format]}"
                (self.out_dir / file_name).write_bytes(body)
            return

        for report in reports:
            body = emit(report, self.format, width=self.width)
            if not body:
                logger.info("report %d (%s) has no cohomology table for TSV output", report.index, report.command)
                continue
            sys.stdout.write(body.decode("utf-8"))
        sys.stdout.flush()


def main():

    parser = make_argument_parser()
    args_ns = parser.parse_args()

    configure_logging(args_ns.verbose)

    if args_ns.demo:
        # ".demo" names resolve to the sessions held in filtergrade/demo.py
        args_ns.sessions = DEMO_SESSIONS
    elif not args_ns.sessions:
        parser.print_usage()
        print("One or more session files required")
        sys.exit(EXIT_ERROR)

    try:
        app = FilterGradeApplication(args_ns)
    except ValueError as exc:
        parser.error(str(exc))

    sys.exit(app.run())


if __name__ == '__main__':
    main()

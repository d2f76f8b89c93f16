#!/usr/bin/env python3
"""
Termination checker command line driver.

Reads a program, stores its definitions while checking them for termination,
and evaluates its terms.

Usage: ``python termcheck/driver.py [options] [FILE]``
"""

import argparse
import dataclasses
import logging
import os
import sys
from typing import NamedTuple

from config import LOG_LEVEL_ENV, Options, load_options
from const import EVENTS, VERSION, ExitCode
from dot import build_digraph
from errors import SourceError
from session import CallLine, ErrorLine, ResultLine, Session, VerdictLine
from syntax import parse

_LOG = logging.getLogger("driver")  # avoid having __main__ in log messages

_LOGGERS = ("syntax", "evaluator", "extract", "checker", "session", "dot", "config", "driver")
_EXCLUSIVE = {"check_only", "eval_only"}


class RunResult(NamedTuple):
    exit_code: ExitCode
    output: str
    """Text for standard output"""
    errors: str
    """Text for standard error"""


def run(source: str, options: Options | None = None) -> RunResult:
    """
    Check and evaluate a whole program.

    :param source: program text
    :param options: run options, defaults if None
    :return: exit code and the text written to standard output and standard error
    """
    options = options or Options()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), options.recursion_limit))
    try:
        program = parse(source)
    except SourceError as err:
        _LOG.error("Cannot parse the program: %s", err)
        return RunResult(ExitCode.PARSE_ERROR, "", f"{ErrorLine(str(err)).render()}\n")

    output: list[str] = []
    errors: list[str] = []
    session = Session(options)

    def on_call(line: CallLine) -> None:
        if not options.eval_only:
            output.append(line.render(options.verbose))

    def on_verdict(line: VerdictLine) -> None:
        if not options.eval_only:
            output.append(line.render())

    def on_result(line: ResultLine) -> None:
        output.append(line.render())

    def on_error(line: ErrorLine) -> None:
        errors.append(line.render())

    session.events.on(EVENTS.CALL, on_call)
    session.events.on(EVENTS.VERDICT, on_verdict)
    session.events.on(EVENTS.RESULT, on_result)
    session.events.on(EVENTS.ERROR, on_error)
    session.run(program)

    text = "".join(f"{line}\n" for line in output)
    if options.dot is not None:
        digraph = build_digraph(session.completed if options.dot_completed else session.graph)
        if options.dot == "-":
            text += digraph.source
        else:
            digraph.save(options.dot)
            _LOG.info("Call graph written to %s", options.dot)

    exit_code = ExitCode.OK
    if session.runtime_errors:
        exit_code = ExitCode.RUNTIME_ERROR
    elif options.strict and session.failures:
        _LOG.warning("%d function(s) fail the termination check", len(session.failures))
        exit_code = ExitCode.STRICT_FAILURE
    return RunResult(exit_code, text, "".join(f"{line}\n" for line in errors))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termcheck", description="Termination checker for a small functional language."
    )
    parser.add_argument("file", nargs="?", metavar="FILE", help="program text, standard input if omitted")
    only = parser.add_mutually_exclusive_group()
    only.add_argument("--check-only", action="store_true", default=None, help="do not evaluate terms")
    only.add_argument("--eval-only", action="store_true", default=None, help="print no call or verdict lines")
    parser.add_argument("--strict", action="store_true", default=None, help="exit with 3 if a function fails")
    parser.add_argument(
        "--dot",
        nargs="?",
        const="-",
        metavar="FILE",
        help="export the call graph in DOT format, to standard output or with --dot=FILE to FILE",
    )
    parser.add_argument("--dot-completed", action="store_true", default=None, help="export the completed graph")
    parser.add_argument("--verbose", action="store_true", default=None, help="print the full call matrices")
    parser.add_argument("--fuel", type=int, metavar="N", help="evaluation step budget")
    parser.add_argument("--config", metavar="FILE", help="JSON file with default options")
    parser.add_argument("--version", action="version", version=f"termcheck {VERSION}")
    return parser


def parse_arguments(parser: argparse.ArgumentParser, argv: list[str] | None = None) -> argparse.Namespace:
    """
    Parse the command line.

    The DOT file can only be given as ``--dot=FILE``: a bare ``--dot`` never
    takes the next argument, which is the program file.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    end = argv.index("--") if "--" in argv else len(argv)
    argv = ["--dot=-" if arg == "--dot" else arg for arg in argv[:end]] + argv[end:]
    return parser.parse_args(argv)


def options_from_args(args: argparse.Namespace) -> Options:
    """
    Merge the config file values with the flags given on the command line.

    :raises ValueError: if the flags themselves are invalid
    """
    values = load_options(args.config)
    flags = {
        field.name: getattr(args, field.name)
        for field in dataclasses.fields(Options)
        if getattr(args, field.name, None) is not None
    }
    # one of the exclusive flags on the command line replaces both from the file
    if flags.keys() & _EXCLUSIVE:
        for name in _EXCLUSIVE:
            values.pop(name, None)
    return Options(**(values | flags))


def main(argv: list[str] | None = None) -> int:
    """Run the termination checker from the command line."""
    logging.basicConfig()

    level = os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
    for name in _LOGGERS:
        logging.getLogger(name).setLevel(level)

    parser = build_parser()
    args = parse_arguments(parser, argv)
    try:
        options = options_from_args(args)
    except ValueError as err:
        parser.error(str(err))

    if args.file and options.dot not in (None, "-") and os.path.abspath(options.dot) == os.path.abspath(args.file):
        parser.error(f"the call graph cannot overwrite the program file {args.file}")

    if args.file:
        try:
            with open(args.file, encoding="utf-8") as f:
                source = f.read()
        except OSError as err:
            parser.error(f"cannot read {args.file}: {err.strerror}")
    else:
        source = sys.stdin.read()

    result = run(source, options)
    sys.stdout.write(result.output)
    sys.stderr.write(result.errors)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

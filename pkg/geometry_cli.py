"""
Single command-line front end for the numbered scripts.

    python geometry_cli.py convert --to <kind> [--a <len> --b <len>] [--segment e,f | --all] [--tol <t>] <in> <out>
    python geometry_cli.py compare --grid <n> --tol <t> <A> <B>
    python geometry_cli.py check-polygon <in>
    python geometry_cli.py sample --grid <n> <in> <out>

Exit codes: 0 pass, 1 usage, 2 parse/validate (and I/O), 3 tolerance or control-polygon condition failure.
"""
import argparse
import importlib
import json
import logging
import sys

from geometry_exceptions import (
    ControlPolygonConditionFailed,
    MixedSlopeRejected,
    ToleranceExceeded,
    UsageError,
)

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_TOLERANCE = 3

COMMANDS = {
    "convert": ("01_convert_geometry", "GeometryConvert", "convert a document to ancf48, ancf36 or bezier"),
    "compare": ("02_compare_geometry", "GeometryCompare", "compare two documents on a normalized grid"),
    "check-polygon": ("03_check_polygon", "PolygonCheck", "test the corner parallelogram condition"),
    "sample": ("04_sample_geometry", "GeometrySample", "dump grid points for plotting"),
}


class GeometryArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def exit_code_for(failure) -> int:
    if failure is None:
        return EXIT_PASS
    if isinstance(failure, UsageError):
        return EXIT_USAGE
    if isinstance(failure, (ToleranceExceeded, ControlPolygonConditionFailed, MixedSlopeRejected)):
        return EXIT_TOLERANCE
    # GeometryFileError, GeometryDomainError and OSError
    return EXIT_INVALID


def build_parser():
    parser = GeometryArgumentParser(prog="geometry_cli")
    parser.add_argument("--verbose", dest="verbose", action="store_true", help="log kernel debug messages")
    subparsers = parser.add_subparsers(dest="command")
    for name, (module_name, class_name, help_text) in COMMANDS.items():
        module = importlib.import_module(module_name)
        subparser = subparsers.add_parser(name, help=help_text)
        module.add_arguments(subparser)
        subparser.set_defaults(command_class=getattr(module, class_name))
    return parser


def _printable(result):
    return json.dumps(result, default=str, indent=2)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        command = args.command_class.from_args(args)
    except UsageError as e:
        print(e.message, file=sys.stderr)
        return EXIT_USAGE

    result = command.doit()
    code = exit_code_for(command.failure)
    if command.failure is not None:
        print(command.message, file=sys.stderr)
        message, details = result
        if details is not None:
            print(_printable(details))
    else:
        print(_printable(result))
    return code


if __name__ == "__main__":
    sys.exit(main())

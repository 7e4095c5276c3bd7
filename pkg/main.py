#!/usr/bin/env python3
from typing import List, Optional
import argparse
import logging
import sys

import command_handlers

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="goalrec", description="Goal recognition over STRIPS landmarks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, handler in command_handlers.COMMAND_HANDLERS.items():
        handler.add_arguments(commands.add_parser(name, help=handler.help))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Точка входа CLI. Код 0: успех, 1: настоящая цель не распознана, 2: ошибка."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    return command_handlers.handler_for(args.command).handle_command(args)


if __name__ == '__main__':
    sys.exit(main())

"""Роутеры подкоманд поверх argparse, в духе Router/Dispatcher."""
import argparse
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

from errors import ValidationError


@dataclass(frozen=True)
class Argument:
    flags: Tuple[str, ...]
    options: dict


def arg(*flags: str, **options) -> Argument:
    return Argument(flags, options)


@dataclass
class Command:
    name: str
    handler: Callable[[argparse.Namespace], str]
    arguments: Tuple[Argument, ...]
    help: str = ""


@dataclass
class Router:
    commands: List[Command] = field(default_factory=list)

    def command(self, name: str, *arguments: Argument, help: str = ""):
        def decorator(handler):
            self.commands.append(Command(name, handler, arguments, help))
            return handler
        return decorator


class StrictParser(argparse.ArgumentParser):
    # неизвестные флаги и ошибки разбора - ошибка валидации, а не SystemExit(2)
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


class Dispatcher:
    def __init__(self, prog: str = "boxlab"):
        self.prog = prog
        self.routers: List[Router] = []

    def include_router(self, router: Router):
        self.routers.append(router)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = StrictParser(prog=self.prog, description="CHSH boxes, wirings and the deformation bound")
        subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=StrictParser)
        for router in self.routers:
            for command in router.commands:
                sub = subparsers.add_parser(command.name, help=command.help)
                for argument in command.arguments:
                    sub.add_argument(*argument.flags, **argument.options)
                sub.set_defaults(handler=command.handler)
        return parser

    def feed(self, argv: List[str]) -> str:
        args = self.build_parser().parse_args(argv)
        logging.debug(f"dispatching {args.subcommand}")
        return args.handler(args)

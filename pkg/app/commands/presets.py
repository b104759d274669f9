"""
presets - list, show or export risk-model presets
"""

import argparse

from app.commands.options import resolve_preset
from app.services.presets import dump_preset, list_presets, save_preset


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "presets",
        help="List or export risk-model presets",
        description="Without a name, list the available presets. With a name, print its key-value document.",
    )
    parser.add_argument("name", nargs="?", default=None, help="Preset to show")
    parser.add_argument("--out", default=None, help="Write the preset document to this path")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    if args.name is None:
        return "".join(f"{name}\n" for name in list_presets())
    models = resolve_preset(args.name)
    if args.out:
        save_preset(models, args.out)
        return ""
    return dump_preset(models)

"""
import - validate an external dataset CSV and normalise it to the lab schema
"""

import argparse

from app.commands.options import add_format
from app.controllers.dataset_io import dataset_frame, export_dataset, import_dataset
from app.stats.formatting import render


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "import",
        help="Validate a dataset CSV",
        description="Check a dataset (e.g. the published one) against the schema and print its coding report.",
    )
    parser.add_argument("data", help="Dataset CSV")
    parser.add_argument("--out", default=None, help="Write the normalised dataset here")
    add_format(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    data = import_dataset(args.data)
    if args.out:
        export_dataset(data, args.out)

    # Code counts per column
    counts = dataset_frame(data).apply(lambda column: column.value_counts()).fillna(0).astype(int).T
    counts.columns = [f"={code}" for code in counts.columns]
    frame = counts.rename_axis("column").reset_index()

    output = render(frame, args.format)
    if args.format == "text":
        output = f"{data.n} rows, digest {data.digest()}\n" + output
    return output

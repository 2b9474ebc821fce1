"""Command line front end: ``paircorr-figures render --in data.csv --out fig.png``."""

from __future__ import annotations

import argparse
import sys

from .errors import FigureError
from .render import IMAGE_FORMATS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paircorr-figures",
        description="Render pair-distance histogram CSVs as figures",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_render = sub.add_parser("render", help="render one CSV to one image")
    p_render.add_argument("--in", dest="input_csv", required=True, help="histogram CSV path")
    p_render.add_argument("--out", dest="output_path", required=True, help="image path")
    p_render.add_argument("--title", default=None)
    p_render.add_argument(
        "--format",
        dest="image_format",
        choices=IMAGE_FORMATS,
        default=None,
        help="image format (default: from --out extension, else png)",
    )
    p_render.add_argument("--dpi", type=int, default=150)
    return parser


def _resolve_format(output_path: str, explicit: str | None) -> str:
    if explicit is not None:
        return explicit
    suffix = output_path.rsplit(".", 1)[-1].lower() if "." in output_path else ""
    return suffix if suffix in IMAGE_FORMATS else "png"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            input_csv=args.input_csv,
            output_path=args.output_path,
            title=args.title,
            image_format=_resolve_format(args.output_path, args.image_format),
            dpi=args.dpi,
        )
        render(spec)
    except FigureError as exc:
        print(f"paircorr-figures: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

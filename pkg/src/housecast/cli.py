"""Command line: validate a dataset, run forecasts, or serve the API.

Documents go to stdout; everything else goes to stderr.  Exit status is 0
exactly when the requested output was produced.
"""

import argparse
import os
import sys

from .engine import (
    document_to_csv,
    document_to_json,
    load_engine,
    split_override_pair,
)


def _add_data_dir(parser):
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("HOUSECAST_DATA_DIR"),
        help="dataset directory (falls back to $HOUSECAST_DATA_DIR)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="housecast",
        description="House midterm seat forecasts from a dataset directory.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="load and check every fixture")
    _add_data_dir(validate)

    forecast = commands.add_parser("forecast", help="run one model, print a document")
    forecast.add_argument("model", help="generic-ballot, npdi, structure-x, seats-in-trouble")
    _add_data_dir(forecast)
    forecast.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override a forecast input (repeatable)",
    )
    forecast.add_argument("--format", choices=("json", "csv"), default="json")
    forecast.add_argument("--sims", type=int, default=None, help="npdi simulation count")
    forecast.add_argument("--seed", type=int, default=None, help="npdi master seed")

    serve = commands.add_parser("serve", help="serve the JSON API and bundled UI")
    _add_data_dir(serve)
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument(
        "--cors-origin", dest="cors_origins", action="append", default=[],
        metavar="ORIGIN", help="extra allowed origin (repeatable)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.data_dir is None:
        print(
            "error: no dataset directory; pass --data-dir or set HOUSECAST_DATA_DIR",
            file=sys.stderr,
        )
        return 2
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "forecast":
            return _cmd_forecast(args)
        return _cmd_serve(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _cmd_validate(args) -> int:
    dataset = load_engine(args.data_dir).dataset
    print(
        f"ok: {len(dataset.polls)} polls, {len(dataset.elections)} elections, "
        f"{len(dataset.districts)} districts, {len(dataset.ratings)} ratings, "
        f"digest {dataset.digest}",
        file=sys.stderr,
    )
    return 0


def _cmd_forecast(args) -> int:
    overrides = dict(split_override_pair(pair) for pair in args.overrides)
    engine = load_engine(args.data_dir)
    document = engine.forecast(
        args.model, overrides, n_sims=args.sims, seed=args.seed
    )
    if args.format == "json":
        sys.stdout.write(document_to_json(document) + "\n")
    else:
        sys.stdout.write(document_to_csv(document))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(args.data_dir, cors_origins=args.cors_origins)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0

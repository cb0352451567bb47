"""The forge command line.

Subcommands: generate (corpus -> datasets), context (one passage for
inference), score (predictions vs dataset), verify (offset re-check),
parse (GEDCOM diagnostics), serve (HTTP API).  Exit codes: 0 success,
1 usage/config error, 2 parse or verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .evaluate import ConfigError as HarnessConfigError
from .gedcom import ParseError, parse_file
from .graph import UnknownPerson
from .pipeline import (
    CONFIG_KEYS,
    ConfigError,
    IoError,
    VerificationFailed,
    _parse_bool,
    build_config,
    parse_config_text,
    run_context,
    run_generate,
    run_score,
    run_verify,
)
from .verbalize import EmptyPassage

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting(2)."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="forge",
        description="GEDCOM family trees to SQuAD 2.0 QA datasets.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging (-vv for debug)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    g = sub.add_parser("generate", help="run the full dataset generation")
    g.add_argument("--config", help="flat key=value config file")
    for key in CONFIG_KEYS:
        g.add_argument(f"--{key}", metavar="VALUE",
                       help=f"override config key {key}")
    g.set_defaults(func=_cmd_generate)

    c = sub.add_parser("context", help="print one person's passage")
    c.add_argument("--tree", required=True, help="GEDCOM file")
    c.add_argument("--person", required=True, help="person id, e.g. @I1@")
    c.add_argument("--depth", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--degree_strict", default="true", metavar="BOOL")
    c.add_argument("--template_library", default=None)
    c.set_defaults(func=_cmd_context)

    s = sub.add_parser("score", help="score a predictions file")
    s.add_argument("--dataset", required=True)
    s.add_argument("--predictions", required=True)
    s.add_argument("--out", default=None, help="report TSV path")
    s.set_defaults(func=_cmd_score)

    vf = sub.add_parser("verify", help="re-check dataset answer offsets")
    vf.add_argument("--dataset", required=True)
    vf.set_defaults(func=_cmd_verify)

    p = sub.add_parser("parse", help="parse a GEDCOM file, dump warnings")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_parse)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(func=_cmd_serve)

    return parser


def _cmd_generate(args) -> int:
    file_values = {}
    if args.config:
        file_values = parse_config_text(
            Path(args.config).read_text(encoding="utf-8"))
    overrides = {}
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    config = build_config(file_values, overrides)
    manifest = run_generate(config)
    for depth, stats in sorted(manifest.depth_stats.items()):
        print(f"depth {depth}: {stats.paragraphs} paragraphs, "
              f"{stats.total_questions} questions")
    print(f"wrote {len(manifest.digests)} files to {config.output_dir}")
    return EXIT_OK


def _cmd_context(args) -> int:
    text = run_context(
        args.tree, args.person, args.depth, seed=args.seed,
        degree_strict=_parse_bool(args.degree_strict),
        template_library=args.template_library)
    print(text)
    return EXIT_OK


def _cmd_score(args) -> int:
    report, tsv = run_score(args.dataset, args.predictions, args.out)
    sys.stdout.write(tsv)
    if report.unknown_ids:
        shown = ", ".join(report.unknown_ids[:5])
        print(f"warning: {len(report.unknown_ids)} prediction id(s) not in "
              f"the dataset: {shown}", file=sys.stderr)
    if report.missing_ids:
        print(f"warning: {len(report.missing_ids)} dataset item(s) had no "
              f"prediction and were scored as abstentions", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_verify(args.dataset)
    if report.clean:
        print("OK: all answer offsets verified")
        return EXIT_OK
    for item_id, reason in report.mismatches:
        print(f"{item_id}\t{reason}")
    return EXIT_DATA


def _cmd_parse(args) -> int:
    doc = parse_file(args.input)
    for line in doc.warning_lines():
        print(line)
    print(f"{args.input}: {len(doc.individuals)} person(s), "
          f"{len(doc.families)} family(ies)")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, HarnessConfigError) as exc:
        print(f"forge: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, VerificationFailed, UnknownPerson, EmptyPassage) as exc:
        print(f"forge: {exc}", file=sys.stderr)
        return EXIT_DATA
    except IoError as exc:
        print(f"forge: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"forge: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Operator command line: validate/ingest vocabulary files, parse classmarks
offline, mint URIs, dump lookup payloads, and run the HTTP service.

Exit codes: 0 success or data answer, 1 usage, 2 data/integrity, 3 runtime.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
import threading
from pathlib import Path

from . import notation as nt
from . import service as svc
from .resolver import interpret, mint_uri
from .store import DatasetTier, IngestError, NotFound, Snapshot, load_snapshot

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3

INGEST_FILES = ("records.jsonl", "redirects.jsonl", "alignments.jsonl")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _ArgumentParser:
    # the global flags are accepted before or after the subcommand
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--base-uri", default=argparse.SUPPRESS,
                        help="URI namespace for minted identifiers")
    shared.add_argument("--snapshot", default=argparse.SUPPRESS,
                        help="snapshot archive directory")
    shared.add_argument("--format", choices=["json", "ttl", "html"],
                        default=argparse.SUPPRESS, help="output format for lookup")

    parser = _ArgumentParser(prog="classmarks", description=__doc__, parents=[shared])
    parser.set_defaults(base_uri="https://udcdata.info", snapshot=None, format="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", parents=[shared],
                              help="validate ingestion files, write a snapshot archive")
    p_ingest.add_argument("source", help="directory containing " + ", ".join(INGEST_FILES))
    p_ingest.add_argument("-o", "--out", required=True, help="output archive directory")
    p_ingest.add_argument("--lenient", action="store_true",
                          help="treat dangling references as warnings, not errors")

    p_parse = sub.add_parser("parse", parents=[shared],
                             help="parse a classmark and print its components")
    p_parse.add_argument("classmark")

    p_lookup = sub.add_parser("lookup", parents=[shared],
                              help="interpret a classmark against a snapshot")
    p_lookup.add_argument("classmark")
    p_lookup.add_argument("--tier", choices=["summary", "abridged", "full"], default="full")

    p_mint = sub.add_parser("mint", parents=[shared], help="print the URI for a notation")
    p_mint.add_argument("notation")

    p_serve = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    p_serve.add_argument("config", help="JSON config file")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "ingest": cmd_ingest,
        "parse": cmd_parse,
        "lookup": cmd_lookup,
        "mint": cmd_mint,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


def _load_archive(args) -> Snapshot:
    if not args.snapshot:
        print("a --snapshot archive directory is required", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    directory = Path(args.snapshot)
    for name in INGEST_FILES:
        if not (directory / name).is_file():
            print(f"snapshot archive is missing {name}", file=sys.stderr)
            raise SystemExit(EXIT_DATA)
    try:
        return svc.load_snapshot_dir(directory)
    except IngestError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_DATA) from None


def cmd_ingest(args) -> int:
    source = Path(args.source)
    texts = {}
    for name in INGEST_FILES:
        path = source / name
        if not path.is_file():
            print(f"missing ingestion file: {path}", file=sys.stderr)
            return EXIT_DATA
        texts[name] = path.read_text(encoding="utf-8")
    try:
        snapshot = load_snapshot(*(texts[n] for n in INGEST_FILES))
    except IngestError as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_DATA
    for finding in snapshot.integrity:
        print(f"integrity: {finding}", file=sys.stderr)
    if snapshot.integrity and not args.lenient:
        print(f"{len(snapshot.integrity)} integrity error(s); archive not written "
              f"(use --lenient to downgrade)", file=sys.stderr)
        return EXIT_DATA

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in INGEST_FILES:
        (out / name).write_text(texts[name], encoding="utf-8")
    manifest = {
        "checksum": snapshot.checksum,
        "versions": [{"label": v.label, "ordinal": v.ordinal} for v in snapshot.versions],
        "counts": {
            "records": len(snapshot.records),
            "redirects": len(snapshot.redirects),
            "alignments": len(snapshot.alignments),
        },
        "integrity": list(snapshot.integrity),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"{len(snapshot.records)} records, {len(snapshot.redirects)} redirects, "
          f"{len(snapshot.alignments)} alignments")
    print(f"checksum {snapshot.checksum}")
    print(f"archive written to {out}")
    return EXIT_OK


def cmd_parse(args) -> int:
    try:
        classmark = nt.normalize(args.classmark)
        tree = nt.parse(classmark)
    except nt.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        print(exc.caret_line(args.classmark if isinstance(args.classmark, str) else ""),
              file=sys.stderr)
        return EXIT_DATA
    print(classmark.normalized)
    _print_tree(tree.root, indent=0)
    for leaf in nt.leaves(tree):
        print(f"component {leaf.text}  kind={leaf.kind}  span={leaf.span[0]}:{leaf.span[1]}")
    return EXIT_OK


def _print_tree(node: nt.Node, indent: int) -> None:
    pad = "  " * indent
    if isinstance(node, nt.MainNumber):
        print(f"{pad}main {node.text} [{node.span[0]}:{node.span[1]}]")
    elif isinstance(node, nt.CommonAuxiliary):
        print(f"{pad}{node.kind}-aux {node.body} [{node.span[0]}:{node.span[1]}]")
    elif isinstance(node, nt.SpecialAuxiliary):
        print(f"{pad}{node.kind}-aux {node.body} [{node.span[0]}:{node.span[1]}]")
    elif isinstance(node, nt.Attachment):
        print(f"{pad}attachment")
        _print_tree(node.base, indent + 1)
        for aux in node.auxiliaries:
            _print_tree(aux, indent + 1)
    elif isinstance(node, nt.Range):
        print(f"{pad}range /")
        _print_tree(node.low, indent + 1)
        _print_tree(node.high, indent + 1)
    elif isinstance(node, nt.Relation):
        print(f"{pad}relation {'::' if node.ordered else ':'}")
        for m in node.members:
            _print_tree(m, indent + 1)
    elif isinstance(node, nt.Coordination):
        print(f"{pad}coordination +")
        for m in node.members:
            _print_tree(m, indent + 1)
    elif isinstance(node, nt.Group):
        print(f"{pad}group [ ]")
        _print_tree(node.inner, indent + 1)


def cmd_lookup(args) -> int:
    snapshot = _load_archive(args)
    fmt = {"json": svc.JSON, "ttl": svc.TURTLE, "html": svc.HTML}[args.format]
    try:
        report = interpret(args.classmark, DatasetTier.from_label(args.tier),
                           snapshot, args.base_uri)
    except nt.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        print(exc.caret_line(args.classmark), file=sys.stderr)
        return EXIT_DATA
    body = svc.render_report(report, fmt, snapshot, args.base_uri)
    sys.stdout.buffer.write(body)
    sys.stdout.buffer.flush()
    return EXIT_OK


def cmd_mint(args) -> int:
    snapshot = _load_archive(args)
    try:
        uri = mint_uri(args.notation, snapshot, args.base_uri)
    except NotFound:
        print(f"unknown notation: {args.notation}", file=sys.stderr)
        return EXIT_DATA
    print(uri.rendered)
    return EXIT_OK


def cmd_serve(args) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        config = svc.ServiceConfig.from_file(args.config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not config.snapshot_dir:
        print("config error: no snapshot directory configured", file=sys.stderr)
        return EXIT_DATA
    try:
        snapshot = svc.load_snapshot_dir(config.snapshot_dir)
    except (OSError, IngestError) as exc:
        print(f"snapshot error: {exc}", file=sys.stderr)
        return EXIT_DATA

    app = svc.Application(config, snapshot)
    try:
        server = svc.make_server(app)
    except OSError as exc:
        print(f"cannot bind {config.host}:{config.port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    def _shutdown(signum, frame):
        # shutdown() must run off the serving thread to avoid deadlock
        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGTERM, _shutdown)
    signal.signal(signal.SIGINT, _shutdown)
    print(f"ready: http://{config.host}:{config.port}/ "
          f"({len(snapshot.records)} records, checksum {snapshot.checksum[:12]})",
          file=sys.stderr, flush=True)
    svc.run(app, server)
    print("shut down", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

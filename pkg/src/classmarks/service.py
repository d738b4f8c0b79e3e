"""HTTP face of the look-up service.

Routes:

    /lookup?classmark=...     classmark interpretation (format/tier/key params)
    /{version}/{notation}     dereferenceable concept URIs, content-negotiated
    /{legacy-numeric-id}      301 concordance to the version-scoped URI
    /healthz                  liveness and snapshot checksum
    /, /static/...            optional static asset bundle (the HTML client)

Legacy identifiers are all-numeric, version labels are not, so the two
single-segment routes cannot collide. Requests are handled against the
snapshot reference taken at request start; swap_snapshot publishes a new
snapshot atomically and never disturbs in-flight requests.

All error bodies are JSON: {"error": ...} plus "position" on 400 parse
errors and "open_superclass" on 403 tier denials. A 403 for a blocked record
discloses nothing but the requested notation, the required tier, and the
nearest open superclass.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlsplit

from . import notation as nt
from . import rdf
from .resolver import (ComponentStatus, InterpretationReport, decode_notation,
                       interpret, legacy_lookup, open_superclass_of, record_uri)
from .store import (ConceptRecord, DatasetTier, NotFound, Snapshot, TierBlocked,
                    load_snapshot)

log = logging.getLogger("classmarks.service")

HTML = "html"
TURTLE = "turtle"
JSON = "json"

_FORMAT_PARAMS = {"html": HTML, "ttl": TURTLE, "json": JSON}
_MEDIA_TYPES = {"text/html": HTML, "text/turtle": TURTLE, "application/json": JSON}
_CONTENT_TYPES = {
    HTML: "text/html; charset=utf-8",
    TURTLE: "text/turtle; charset=utf-8",
    JSON: "application/json",
}


class NegotiationError(Exception):
    """No representation satisfies the request (406)."""


class Denial(Exception):
    """Authorization refused for the requested tier."""


@dataclass(frozen=True)
class AccessGrant:
    tier: DatasetTier
    key_id: Optional[str] = None


@dataclass(frozen=True)
class ServiceConfig:
    base_uri: str
    host: str = "127.0.0.1"
    port: int = 8080
    keys: dict[str, DatasetTier] = field(default_factory=dict)
    snapshot_dir: Optional[str] = None
    static_dir: Optional[str] = None

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        keys = {}
        for key, tier in raw.get("keys", {}).items():
            try:
                keys[key] = DatasetTier.from_label(tier)
            except ValueError:
                raise ValueError(f"config key table: {key!r} has bad tier {tier!r}") from None
        if not raw.get("base_uri"):
            raise ValueError("config requires base_uri")
        return cls(
            base_uri=raw["base_uri"].rstrip("/"),
            host=raw.get("host", "127.0.0.1"),
            port=int(raw.get("port", 8080)),
            keys=keys,
            snapshot_dir=raw.get("snapshot"),
            static_dir=raw.get("static_dir"),
        )


@dataclass(frozen=True)
class HttpRequest:
    method: str
    path: str  # percent-encoded, no query string
    query: dict[str, str]
    headers: dict[str, str]  # lowercase names

    @classmethod
    def from_target(cls, method: str, target: str, headers: Optional[dict] = None) -> "HttpRequest":
        parts = urlsplit(target)
        query = {k: v[0] for k, v in parse_qs(parts.query, keep_blank_values=True).items()}
        lowered = {k.lower(): v for k, v in (headers or {}).items()}
        return cls(method=method.upper(), path=parts.path or "/", query=query, headers=lowered)


@dataclass(frozen=True)
class HttpResponse:
    status: int
    headers: tuple[tuple[str, str], ...]
    body: bytes

    @property
    def content_type(self) -> str:
        return dict(self.headers).get("Content-Type", "")


def negotiate(accept_header: Optional[str], format_param: Optional[str]) -> str:
    """Response format: explicit format= parameter wins over the Accept
    header; Accept is matched by q-value; the default is JSON. Raises
    NegotiationError for an unsupported explicit format."""
    if format_param is not None:
        fmt = _FORMAT_PARAMS.get(format_param)
        if fmt is None:
            raise NegotiationError(f"unsupported format {format_param!r}")
        return fmt
    if accept_header:
        best, best_q, best_pos = None, 0.0, 0
        for pos, clause in enumerate(accept_header.split(",")):
            media, _, params = clause.strip().partition(";")
            media = media.strip().lower()
            q = 1.0
            for param in params.split(";"):
                name, _, val = param.strip().partition("=")
                if name.strip() == "q":
                    try:
                        q = float(val)
                    except ValueError:
                        q = 0.0
            if q <= 0:
                continue
            fmt = JSON if media == "*/*" else _MEDIA_TYPES.get(media)
            if fmt and (q > best_q or (q == best_q and pos < best_pos)):
                best, best_q, best_pos = fmt, q, pos
        if best:
            return best
    return JSON


def authorize(presented_key: Optional[str], requested_tier: Optional[DatasetTier],
              key_table: dict[str, DatasetTier]) -> AccessGrant:
    """Grant capped at the key's tier; no credential means the open summary
    tier. Raises Denial for unknown keys or over-tier requests."""
    if presented_key is None:
        granted = DatasetTier.SUMMARY
    else:
        granted = key_table.get(presented_key)
        if granted is None:
            raise Denial("unknown authentication key")
    effective = requested_tier if requested_tier is not None else granted
    if effective > granted:
        raise Denial(f"tier {effective.label} requires an authentication key; "
                     f"granted {granted.label}")
    return AccessGrant(tier=effective, key_id=presented_key)


# -- renderers (shared with the CLI so offline output is byte-identical) ----


def report_document(report: InterpretationReport) -> dict:
    """JSON-ready interpretation report, the machine face of a lookup."""
    return {
        "classmark": {"raw": report.input.raw, "normalized": report.input.normalized},
        "snapshot_version": report.snapshot_version.label,
        "tier": report.tier.label,
        "components": [_component_document(c) for c in report.components],
        "composed_uri": report.composed_uri.rendered if report.composed_uri else None,
        "tree": nt.node_to_dict(report.tree),
    }


def _component_document(c: ComponentStatus) -> dict:
    return {
        "notation": c.notation,
        "kind": c.kind,
        "status": c.status,
        "resolvable": c.resolvable,
        "span": list(c.span),
        "uri": c.uri.rendered if c.uri else None,
        "replaced_by": [u.rendered for u in c.replaced_by],
        "open_superclass": ({"notation": c.open_superclass.notation,
                             "uri": c.open_superclass.uri.rendered}
                            if c.open_superclass else None),
    }


def render_report(report: InterpretationReport, fmt: str, snapshot: Snapshot,
                  base_uri: str, version: Optional[str] = None) -> bytes:
    if fmt == JSON:
        return (json.dumps(report_document(report), ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == TURTLE:
        return rdf.serialize_turtle(rdf.report_to_graph(report, snapshot, base_uri, version)).encode("utf-8")
    return _report_html(report).encode("utf-8")


def render_concept(record: ConceptRecord, fmt: str, snapshot: Snapshot, base_uri: str) -> bytes:
    graph = rdf.concept_to_graph(record, snapshot, base_uri)
    if fmt == JSON:
        return rdf.serialize_json(graph).encode("utf-8")
    if fmt == TURTLE:
        return rdf.serialize_turtle(graph).encode("utf-8")
    return _concept_html(record, snapshot, base_uri).encode("utf-8")


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def _page(title: str, body: str) -> str:
    return ("<!doctype html>\n<html><head><meta charset=\"utf-8\">"
            f"<title>{_esc(title)}</title></head>\n<body>\n{body}\n</body></html>\n")


def _report_html(report: InterpretationReport) -> str:
    rows = []
    for c in report.components:
        label = f"<b><u>{_esc(c.notation)}</u></b>" if c.resolvable else _esc(c.notation)
        extra = ""
        if c.status == "deprecated" and c.replaced_by:
            links = ", ".join(f'<a href="{_esc(u.rendered)}">{_esc(u.rendered)}</a>'
                              for u in c.replaced_by)
            extra = f" &rarr; {links}"
        elif c.status == "tier-blocked" and c.open_superclass:
            extra = (f" (open superclass: <a href=\"{_esc(c.open_superclass.uri.rendered)}\">"
                     f"{_esc(c.open_superclass.notation)}</a>)")
        uri = (f' &mdash; <a href="{_esc(c.uri.rendered)}">{_esc(c.uri.rendered)}</a>'
               if c.uri else "")
        rows.append(f"<li>{label} <i>{_esc(c.kind)}</i>: {_esc(c.status)}{uri}{extra}</li>")
    composed = (f'<p>Composed: <a href="{_esc(report.composed_uri.rendered)}">'
                f"{_esc(report.composed_uri.rendered)}</a></p>" if report.composed_uri else "")
    body = (f"<h1>{_esc(report.input.normalized)}</h1>"
            f"<p>tier {_esc(report.tier.label)}, snapshot {_esc(report.snapshot_version.label)}</p>"
            f"<ol>{''.join(rows)}</ol>{composed}")
    return _page(f"Lookup {report.input.normalized}", body)


def _concept_html(record: ConceptRecord, snapshot: Snapshot, base_uri: str) -> str:
    uri = record_uri(record, base_uri).rendered
    items = [f"<dt>notation</dt><dd>{_esc(record.notation)}</dd>"]
    for lang in sorted(record.caption):
        items.append(f"<dt>caption ({_esc(lang)})</dt><dd>{_esc(record.caption[lang])}</dd>")
    for name, value in (("including note", record.including_note),
                        ("application note", record.application_note),
                        ("scope note", record.scope_note),
                        ("revision history", record.revision_history)):
        if value:
            items.append(f"<dt>{name}</dt><dd>{_esc(value)}</dd>")
    for name, value in (("introduced", record.introduction_date),
                        ("cancelled", record.cancellation_date),
                        ("last revised", record.last_revision_date)):
        if value:
            items.append(f"<dt>{name}</dt><dd>{value.isoformat()}</dd>")
    if record.replaced_by:
        items.append(f"<dt>replaced by</dt><dd>{_esc(', '.join(record.replaced_by))}</dd>")
    body = (f"<h1>{_esc(record.notation)}</h1><p><code>{_esc(uri)}</code></p>"
            f"<dl>{''.join(items)}</dl>")
    return _page(record.notation, body)


# -- application core --------------------------------------------------------


class Application:
    """Routing and handlers over an atomically swappable snapshot."""

    def __init__(self, config: ServiceConfig, snapshot: Snapshot):
        self.config = config
        self._snapshot = snapshot

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    def swap_snapshot(self, new_snapshot: Snapshot) -> None:
        """Atomic publication; in-flight requests keep the snapshot they
        started with."""
        self._snapshot = new_snapshot

    def handle(self, request: HttpRequest) -> HttpResponse:
        snapshot = self._snapshot  # pinned for the whole request
        ctx: dict[str, str] = {}
        try:
            response = self._route(request, snapshot, ctx)
        except NegotiationError as exc:
            response = _error(406, str(exc))
        except Denial as exc:
            response = _error(403, str(exc))
        log.info("%s %s -> %d format=%s tier=%s", request.method, request.path,
                 response.status, ctx.get("format", "-"), ctx.get("tier", "-"))
        return response

    def _route(self, request: HttpRequest, snapshot: Snapshot, ctx: dict) -> HttpResponse:
        if request.method != "GET":
            return _error(405, "only GET is supported")
        path = request.path
        if path == "/healthz":
            return _json_response(200, {"status": "ok", "checksum": snapshot.checksum,
                                        "records": len(snapshot.records)})
        if path == "/lookup":
            return self._lookup(request, snapshot, ctx)
        if path == "/" or path.startswith("/static/"):
            return self._static(path)
        segments = [s for s in path.split("/") if s]
        if len(segments) == 1 and segments[0].isdigit():
            return self._legacy(segments[0], snapshot)
        if len(segments) == 2:
            return self._concept(request, segments[0], segments[1], snapshot, ctx)
        return _error(404, "no such route")

    def _grant(self, request: HttpRequest) -> AccessGrant:
        key = None
        auth = request.headers.get("authorization", "")
        if auth.lower().startswith("bearer "):
            key = auth[7:].strip()
        if "key" in request.query:
            key = request.query["key"]
        requested = None
        if "tier" in request.query:
            try:
                requested = DatasetTier.from_label(request.query["tier"])
            except ValueError:
                raise Denial(f"unknown tier {request.query['tier']!r}") from None
        return authorize(key, requested, self.config.keys)

    def _lookup(self, request: HttpRequest, snapshot: Snapshot, ctx: dict) -> HttpResponse:
        fmt = negotiate(request.headers.get("accept"), request.query.get("format"))
        ctx["format"] = fmt
        grant = self._grant(request)
        ctx["tier"] = grant.tier.label
        classmark = request.query.get("classmark", "")
        version = request.query.get("version")
        try:
            report = interpret(classmark, grant.tier, snapshot, self.config.base_uri, version)
        except nt.ParseError as exc:
            return _json_response(400, {"error": f"cannot parse classmark: {exc}",
                                        "position": exc.position,
                                        "expected": exc.expected,
                                        "found": exc.found})
        body = render_report(report, fmt, snapshot, self.config.base_uri, version)
        return _ok(fmt, body)

    def _concept(self, request: HttpRequest, version_label: str, encoded: str,
                 snapshot: Snapshot, ctx: dict) -> HttpResponse:
        fmt = negotiate(request.headers.get("accept"), request.query.get("format"))
        ctx["format"] = fmt
        grant = self._grant(request)
        ctx["tier"] = grant.tier.label
        try:
            notation_text = decode_notation(encoded)
        except ValueError:
            return _error(404, "undecodable notation")
        try:
            record = snapshot.get(notation_text, grant.tier, version_label)
        except TierBlocked as exc:
            sparse = {
                "error": (f"access to {notation_text} requires the "
                          f"{exc.required.label} dataset tier"),
                "notation": notation_text,
                "required_tier": exc.required.label,
                "open_superclass": None,
            }
            open_super = open_superclass_of(notation_text, snapshot, self.config.base_uri)
            if open_super:
                sparse["open_superclass"] = {"notation": open_super.notation,
                                             "uri": open_super.uri.rendered}
            return _json_response(403, sparse)
        except NotFound:
            return _error(404, f"no concept {notation_text} at version {version_label}")
        return _ok(fmt, render_concept(record, fmt, snapshot, self.config.base_uri))

    def _legacy(self, identifier: str, snapshot: Snapshot) -> HttpResponse:
        try:
            uri = legacy_lookup(identifier, snapshot, self.config.base_uri)
        except NotFound:
            return _error(404, f"unknown legacy identifier {identifier}")
        return HttpResponse(status=301,
                            headers=(("Location", uri.rendered),
                                     ("Content-Type", "application/json")),
                            body=json.dumps({"location": uri.rendered}).encode("utf-8"))

    def _static(self, path: str) -> HttpResponse:
        if not self.config.static_dir:
            if path == "/":
                body = _page("classmark look-up", "<h1>classmark look-up service</h1>"
                             "<p>Endpoints: /lookup, /{version}/{notation}, /healthz</p>")
                return _ok(HTML, body.encode("utf-8"))
            return _error(404, "no static assets configured")
        root = Path(self.config.static_dir).resolve()
        rel = "index.html" if path == "/" else path[len("/static/"):]
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            return _error(404, "no such asset")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        return HttpResponse(status=200, headers=(("Content-Type", ctype),),
                            body=target.read_bytes())


def _ok(fmt: str, body: bytes) -> HttpResponse:
    return HttpResponse(status=200, headers=(("Content-Type", _CONTENT_TYPES[fmt]),), body=body)


def _json_response(status: int, payload: dict) -> HttpResponse:
    return HttpResponse(status=status,
                        headers=(("Content-Type", "application/json"),),
                        body=(json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8"))


def _error(status: int, message: str) -> HttpResponse:
    return _json_response(status, {"error": message})


def load_snapshot_dir(directory: str | Path) -> Snapshot:
    """Load a snapshot from a directory holding the three ingestion files."""
    directory = Path(directory)
    return load_snapshot(
        (directory / "records.jsonl").read_text(encoding="utf-8"),
        (directory / "redirects.jsonl").read_text(encoding="utf-8"),
        (directory / "alignments.jsonl").read_text(encoding="utf-8"),
    )


# -- stdlib HTTP adapter ------------------------------------------------------


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def do_GET(self):  # noqa: N802 (stdlib naming)
        app: Application = self.server.app  # type: ignore[attr-defined]
        request = HttpRequest.from_target("GET", self.path, dict(self.headers))
        response = app.handle(request)
        self.send_response(response.status)
        for name, value in response.headers:
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(response.body)))
        self.end_headers()
        self.wfile.write(response.body)

    def log_message(self, fmt, *args):  # request logging goes through `log`
        pass


def make_server(app: Application) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((app.config.host, app.config.port), _Handler)
    server.app = app  # type: ignore[attr-defined]
    return server


def run(app: Application, server: Optional[ThreadingHTTPServer] = None,
        ready: Optional[threading.Event] = None) -> None:
    server = server or make_server(app)
    host, port = server.server_address[:2]
    log.info("serving %s on http://%s:%s/ (%d records)", app.config.base_uri,
             host, port, len(app.snapshot.records))
    if ready is not None:
        ready.set()
    server.serve_forever()

"""Immutable vocabulary snapshots: versioned concept records, deprecation
redirects, tier membership, and cross-scheme alignments.

Ingestion format (UTF-8, one JSON object per line):

    records.jsonl     one ConceptRecord per line; version references are
                      objects {"label": "MRF93", "ordinal": 1}; dates are
                      "YYYY-MM-DD"; captions map BCP-47 tags to text
    redirects.jsonl   {"from": ..., "to": [...], "since": {...},
                       "withdrawn": false}
    alignments.jsonl  {"local": ..., "external": "http://...",
                       "relation": "identical"}

A snapshot is never mutated after load; services replace whole snapshots
atomically. Dangling references go to the integrity report; structural
defects (duplicates, malformed lines, a deprecated class with no concordance
entry) abort the load.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Optional


class DatasetTier(enum.IntEnum):
    """Nested access levels: summary ⊂ abridged ⊂ full."""

    SUMMARY = 1
    ABRIDGED = 2
    FULL = 3

    @classmethod
    def from_label(cls, label: str) -> "DatasetTier":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown tier {label!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


ALIGNMENT_RELATIONS = ("identical", "local-is-narrower", "local-is-broader", "related")

_ABSOLUTE_URI = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")


@dataclass(frozen=True, order=True)
class VersionCode:
    """A scheme release, ordered by ordinal (labels alone do not sort)."""

    ordinal: int
    label: str


@dataclass(frozen=True)
class ConceptRecord:
    """One class in one scheme version: the fourteen published data elements
    plus bookkeeping (version bounds and tier)."""

    notation: str
    identifier: str
    introduced_in: VersionCode
    tier: DatasetTier
    broader: Optional[str] = None
    caption: dict[str, str] = field(default_factory=dict)
    including_note: Optional[str] = None
    application_note: Optional[str] = None
    scope_note: Optional[str] = None
    examples: tuple[str, ...] = ()
    see_also: tuple[str, ...] = ()
    revision_history: Optional[str] = None
    introduction_date: Optional[date] = None
    cancellation_date: Optional[date] = None
    replaced_by: tuple[str, ...] = ()
    last_revision_date: Optional[date] = None
    cancelled_in: Optional[VersionCode] = None

    @property
    def deprecated(self) -> bool:
        return self.cancellation_date is not None


@dataclass(frozen=True)
class Redirect:
    """Concordance from a cancelled class to its replacements."""

    from_notation: str
    to: tuple[str, ...]
    since: VersionCode
    withdrawn: bool = False


@dataclass(frozen=True)
class Alignment:
    """Typed link from a local concept to an external linked-data resource."""

    local: str
    external: str
    relation: str  # one of ALIGNMENT_RELATIONS


class IngestError(Exception):
    """Structural defect in ingestion data; aborts the load."""

    def __init__(self, message: str, source: str = "", line: int = 0):
        self.source = source
        self.line = line
        prefix = f"{source}:{line}: " if source else ""
        super().__init__(prefix + message)


class NotFound(Exception):
    """The requested notation, version, or identifier is not in the snapshot."""


class TierBlocked(Exception):
    """The record exists but only above the caller's access tier."""

    def __init__(self, notation: str, required: DatasetTier):
        self.notation = notation
        self.required = required
        super().__init__(f"{notation} requires tier {required.label}")


class RedirectCycle(Exception):
    """Concordance entries form a loop."""

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__(" -> ".join(cycle + cycle[:1]))


@dataclass(frozen=True)
class Snapshot:
    """A fully indexed, immutable view of one loaded vocabulary."""

    records: dict[tuple[str, str], ConceptRecord]  # (notation, version label)
    by_notation: dict[str, tuple[ConceptRecord, ...]]  # ascending introduced_in
    redirects: dict[str, Redirect]
    alignments: tuple[Alignment, ...]
    legacy_ids: dict[str, ConceptRecord]
    versions: tuple[VersionCode, ...]  # ascending ordinal
    checksum: str
    integrity: tuple[str, ...]  # dangling-reference report

    @property
    def latest_version(self) -> VersionCode:
        return self.versions[-1]

    def get(self, notation: str, tier: DatasetTier,
            version: Optional[str | VersionCode] = None) -> ConceptRecord:
        """Record for a notation at a version (default: latest).

        Raises NotFound for absent notations/versions and TierBlocked when the
        record sits above the caller's tier.
        """
        recs = self.by_notation.get(notation)
        if not recs:
            raise NotFound(notation)
        if version is None:
            rec = recs[-1]
        else:
            label = version.label if isinstance(version, VersionCode) else version
            ordinal = self._ordinal_of(label)
            if ordinal is None:
                raise NotFound(f"{notation} at unknown version {label}")
            in_force = [r for r in recs if r.introduced_in.ordinal <= ordinal]
            if not in_force:
                raise NotFound(f"{notation} at version {label}")
            rec = in_force[-1]
        if rec.tier > tier:
            raise TierBlocked(notation, rec.tier)
        return rec

    def earliest_version(self, notation: str) -> VersionCode:
        """Minimum-ordinal version in which the notation appeared."""
        recs = self.by_notation.get(notation)
        if not recs:
            raise NotFound(notation)
        return recs[0].introduced_in

    def resolve_redirects(self, notation: str) -> list[str]:
        """Transitive concordance endpoints; no endpoint is deprecated at the
        latest version. Withdrawn classes contribute no endpoints."""
        out: list[str] = []
        self._walk_redirects(notation, [], out)
        deduped: list[str] = []
        for n in out:
            if n not in deduped:
                deduped.append(n)
        return deduped

    def _walk_redirects(self, notation: str, path: list[str], out: list[str]) -> None:
        if notation in path:
            raise RedirectCycle(path[path.index(notation):])
        recs = self.by_notation.get(notation)
        deprecated = bool(recs) and recs[-1].deprecated
        redirect = self.redirects.get(notation)
        if deprecated and redirect is not None:
            if redirect.withdrawn:
                return
            path.append(notation)
            for target in redirect.to:
                self._walk_redirects(target, path, out)
            path.pop()
        else:
            out.append(notation)

    def broader_of(self, notation: str) -> Optional[str]:
        """Explicit broader class when recorded, else notational truncation."""
        recs = self.by_notation.get(notation)
        if recs and recs[-1].broader:
            return recs[-1].broader
        return truncate_notation(notation)

    def nearest_open_superclass(self, notation: str) -> Optional[str]:
        """First notation along the broader chain (itself included) that is
        visible at the open summary tier."""
        seen: set[str] = set()
        current: Optional[str] = notation
        while current and current not in seen:
            seen.add(current)
            recs = self.by_notation.get(current)
            if recs and recs[-1].tier == DatasetTier.SUMMARY:
                return current
            current = self.broader_of(current)
        return None

    def visible(self, tier: DatasetTier) -> list[ConceptRecord]:
        """All records exposed at the given tier, in load order."""
        return [r for r in self.records.values() if r.tier <= tier]

    def _ordinal_of(self, label: str) -> Optional[int]:
        for v in self.versions:
            if v.label == label:
                return v.ordinal
        return None


_DIGITS = set("0123456789")


def truncate_notation(notation: str) -> Optional[str]:
    """Drop the final digit of the last digit run; drop a dot this orphans.
    None once no digits remain (top of the hierarchy)."""
    last = -1
    for i, ch in enumerate(notation):
        if ch in _DIGITS:
            last = i
    if last < 0:
        return None
    shorter = notation[:last] + notation[last + 1:]
    run_emptied = last >= len(shorter) or shorter[last] not in _DIGITS
    if run_emptied and last > 0 and shorter[last - 1] == ".":
        shorter = shorter[:last - 1] + shorter[last:]
    if not any(c in _DIGITS for c in shorter):
        return None
    return shorter


# -- ingestion ---------------------------------------------------------------

_RECORD_FIELDS = {
    "notation", "identifier", "broader", "caption", "including_note",
    "application_note", "scope_note", "examples", "see_also",
    "revision_history", "introduction_date", "cancellation_date",
    "replaced_by", "last_revision_date", "introduced_in", "cancelled_in",
    "tier",
}


def load_snapshot(records_text: str, redirects_text: str, alignments_text: str) -> Snapshot:
    """Parse, validate, and index the three ingestion streams.

    Raises IngestError (with source file and line) on structural defects;
    dangling references land in the snapshot's integrity report instead.
    """
    version_labels: dict[str, int] = {}
    version_ordinals: dict[int, str] = {}

    def intern_version(obj, source: str, line: int) -> VersionCode:
        if not isinstance(obj, dict) or set(obj) != {"label", "ordinal"}:
            raise IngestError("version reference must be {label, ordinal}", source, line)
        label, ordinal = obj["label"], obj["ordinal"]
        if not isinstance(label, str) or not label or not isinstance(ordinal, int):
            raise IngestError("bad version reference", source, line)
        if version_labels.setdefault(label, ordinal) != ordinal:
            raise IngestError(f"version {label} redeclared with ordinal {ordinal}", source, line)
        if version_ordinals.setdefault(ordinal, label) != label:
            raise IngestError(f"ordinal {ordinal} reused for {label}", source, line)
        return VersionCode(ordinal=ordinal, label=label)

    records: dict[tuple[str, str], ConceptRecord] = {}
    for line_no, obj in _jsonl("records.jsonl", records_text):
        rec = _parse_record(obj, line_no, intern_version)
        key = (rec.notation, rec.introduced_in.label)
        if key in records:
            raise IngestError(f"duplicate record {key}", "records.jsonl", line_no)
        records[key] = rec
    if not records:
        raise IngestError("empty vocabulary: no records", "records.jsonl", 0)

    redirects: dict[str, Redirect] = {}
    for line_no, obj in _jsonl("redirects.jsonl", redirects_text):
        rd = _parse_redirect(obj, line_no, intern_version)
        if rd.from_notation in redirects:
            raise IngestError(f"duplicate redirect from {rd.from_notation}",
                              "redirects.jsonl", line_no)
        redirects[rd.from_notation] = rd

    alignments: list[Alignment] = []
    for line_no, obj in _jsonl("alignments.jsonl", alignments_text):
        alignments.append(_parse_alignment(obj, line_no))

    by_notation: dict[str, list[ConceptRecord]] = {}
    for rec in records.values():
        by_notation.setdefault(rec.notation, []).append(rec)
    for recs in by_notation.values():
        recs.sort(key=lambda r: r.introduced_in.ordinal)

    legacy_ids: dict[str, ConceptRecord] = {}
    for rec in records.values():
        if rec.identifier in legacy_ids:
            raise IngestError(f"legacy identifier {rec.identifier} is not unique")
        legacy_ids[rec.identifier] = rec

    # structural cross-checks
    for notation, recs in by_notation.items():
        if recs[-1].deprecated and notation not in redirects:
            raise IngestError(
                f"{notation} is deprecated at its latest version but has no "
                f"concordance entry (add a redirect, possibly withdrawn)")
    for rd in redirects.values():
        recs = by_notation.get(rd.from_notation)
        if not recs or not recs[-1].deprecated:
            raise IngestError(f"redirect source {rd.from_notation} is not a deprecated record")

    integrity: list[str] = []
    known = set(by_notation)
    for rec in records.values():
        for kind, refs in (("broader", [rec.broader] if rec.broader else []),
                           ("see_also", rec.see_also),
                           ("replaced_by", rec.replaced_by)):
            for ref in refs:
                if ref not in known:
                    integrity.append(f"record {rec.notation}: dangling {kind} -> {ref}")
    for rd in redirects.values():
        for target in rd.to:
            if target not in known:
                integrity.append(f"redirect {rd.from_notation}: dangling target -> {target}")
    for al in alignments:
        if al.local not in known:
            integrity.append(f"alignment: unknown local notation {al.local}")

    _check_broader_acyclic(by_notation)

    versions = tuple(VersionCode(ordinal=o, label=l)
                     for o, l in sorted(version_ordinals.items()))
    checksum = hashlib.sha256(
        b"\x1e".join(t.encode("utf-8") for t in (records_text, redirects_text, alignments_text))
    ).hexdigest()

    return Snapshot(
        records=records,
        by_notation={n: tuple(rs) for n, rs in by_notation.items()},
        redirects=redirects,
        alignments=tuple(alignments),
        legacy_ids=legacy_ids,
        versions=versions,
        checksum=checksum,
        integrity=tuple(integrity),
    )


def _jsonl(source: str, text: str) -> Iterable[tuple[int, dict]]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"malformed JSON: {exc.msg}", source, line_no) from None
        if not isinstance(obj, dict):
            raise IngestError("line is not a JSON object", source, line_no)
        yield line_no, obj


def _parse_record(obj: dict, line: int, intern_version) -> ConceptRecord:
    src = "records.jsonl"
    unknown = set(obj) - _RECORD_FIELDS
    if unknown:
        raise IngestError(f"unknown fields {sorted(unknown)}", src, line)
    for required in ("notation", "identifier", "introduced_in", "tier"):
        if required not in obj:
            raise IngestError(f"missing field {required!r}", src, line)
    notation = obj["notation"]
    identifier = obj["identifier"]
    if not isinstance(notation, str) or not notation:
        raise IngestError("notation must be a non-empty string", src, line)
    if not isinstance(identifier, str) or not identifier:
        raise IngestError("identifier must be a non-empty string", src, line)
    caption = obj.get("caption", {})
    if not isinstance(caption, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in caption.items()):
        raise IngestError("caption must map language tags to text", src, line)
    try:
        tier = DatasetTier.from_label(obj["tier"])
    except (ValueError, AttributeError):
        raise IngestError(f"bad tier {obj['tier']!r}", src, line) from None

    rec = ConceptRecord(
        notation=notation,
        identifier=identifier,
        introduced_in=intern_version(obj["introduced_in"], src, line),
        tier=tier,
        broader=_opt_str(obj, "broader", src, line),
        caption=dict(caption),
        including_note=_opt_str(obj, "including_note", src, line),
        application_note=_opt_str(obj, "application_note", src, line),
        scope_note=_opt_str(obj, "scope_note", src, line),
        examples=_str_list(obj, "examples", src, line),
        see_also=_str_list(obj, "see_also", src, line),
        revision_history=_opt_str(obj, "revision_history", src, line),
        introduction_date=_opt_date(obj, "introduction_date", src, line),
        cancellation_date=_opt_date(obj, "cancellation_date", src, line),
        replaced_by=_str_list(obj, "replaced_by", src, line),
        last_revision_date=_opt_date(obj, "last_revision_date", src, line),
        cancelled_in=(intern_version(obj["cancelled_in"], src, line)
                      if obj.get("cancelled_in") is not None else None),
    )
    if not rec.deprecated and (rec.replaced_by or rec.cancelled_in):
        raise IngestError(
            f"{notation}: replaced_by/cancelled_in require a cancellation_date", src, line)
    return rec


def _parse_redirect(obj: dict, line: int, intern_version) -> Redirect:
    src = "redirects.jsonl"
    if set(obj) - {"from", "to", "since", "withdrawn"}:
        raise IngestError(f"unknown fields {sorted(set(obj) - {'from', 'to', 'since', 'withdrawn'})}",
                          src, line)
    for required in ("from", "to", "since"):
        if required not in obj:
            raise IngestError(f"missing field {required!r}", src, line)
    frm = obj["from"]
    if not isinstance(frm, str) or not frm:
        raise IngestError("'from' must be a non-empty string", src, line)
    to = obj["to"]
    if not isinstance(to, list) or not all(isinstance(t, str) and t for t in to):
        raise IngestError("'to' must be a list of notations", src, line)
    withdrawn = obj.get("withdrawn", False)
    if not isinstance(withdrawn, bool):
        raise IngestError("'withdrawn' must be boolean", src, line)
    if withdrawn and to:
        raise IngestError("withdrawn redirect must have empty 'to'", src, line)
    if not withdrawn and not to:
        raise IngestError("non-withdrawn redirect needs targets (or mark withdrawn)", src, line)
    return Redirect(from_notation=frm, to=tuple(to),
                    since=intern_version(obj["since"], src, line), withdrawn=withdrawn)


def _parse_alignment(obj: dict, line: int) -> Alignment:
    src = "alignments.jsonl"
    if set(obj) != {"local", "external", "relation"}:
        raise IngestError("alignment needs exactly {local, external, relation}", src, line)
    local, external, relation = obj["local"], obj["external"], obj["relation"]
    if not isinstance(local, str) or not local:
        raise IngestError("'local' must be a non-empty string", src, line)
    if not isinstance(external, str) or not _ABSOLUTE_URI.match(external):
        raise IngestError(f"'external' must be an absolute URI, got {external!r}", src, line)
    if relation not in ALIGNMENT_RELATIONS:
        raise IngestError(f"relation must be one of {ALIGNMENT_RELATIONS}", src, line)
    return Alignment(local=local, external=external, relation=relation)


def _check_broader_acyclic(by_notation: dict[str, list[ConceptRecord]]) -> None:
    def step(n: str) -> Optional[str]:
        recs = by_notation.get(n)
        if recs and recs[-1].broader:
            return recs[-1].broader
        return truncate_notation(n)

    for start in by_notation:
        seen = {start}
        current = step(start)
        while current:
            if current in seen:
                raise IngestError(f"broader chain from {start} revisits {current}")
            seen.add(current)
            current = step(current)


def _opt_str(obj: dict, key: str, src: str, line: int) -> Optional[str]:
    val = obj.get(key)
    if val is None:
        return None
    if not isinstance(val, str):
        raise IngestError(f"{key} must be a string", src, line)
    return val


def _str_list(obj: dict, key: str, src: str, line: int) -> tuple[str, ...]:
    val = obj.get(key, [])
    if not isinstance(val, list) or not all(isinstance(x, str) and x for x in val):
        raise IngestError(f"{key} must be a list of strings", src, line)
    return tuple(val)


def _opt_date(obj: dict, key: str, src: str, line: int) -> Optional[date]:
    val = obj.get(key)
    if val is None:
        return None
    if isinstance(val, str):
        try:
            return date.fromisoformat(val)
        except ValueError:
            pass
    raise IngestError(f"{key} must be a YYYY-MM-DD date", src, line)

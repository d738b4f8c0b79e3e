"""Classmark interpretation against a snapshot, and the URI scheme.

Concept URIs are version-scoped and percent-encoded:

    <base>/<version label>/<encoded notation>     e.g. …/MRF93/%3D162.3

The version segment is the introduction version of the record the URI
identifies, so a notation re-used after deprecation yields distinct URIs per
era. Synthesized whole-classmark URIs use the reserved pseudo-version segment
"composed" and are flagged non-authoritative in RDF.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import notation as nt
from .store import ConceptRecord, DatasetTier, NotFound, Snapshot, TierBlocked, VersionCode

COMPOSED_SEGMENT = "composed"

VALID = "valid"
DEPRECATED = "deprecated"
UNKNOWN = "unknown"
TIER_BLOCKED = "tier-blocked"

_UNRESERVED = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~"
)
_HEX = "0123456789ABCDEF"


def encode_notation(text: str) -> str:
    """Percent-encode every byte outside the RFC 3986 unreserved set,
    uppercase hex."""
    out = []
    for byte in text.encode("utf-8"):
        ch = chr(byte)
        if ch in _UNRESERVED:
            out.append(ch)
        else:
            out.append("%" + _HEX[byte >> 4] + _HEX[byte & 0xF])
    return "".join(out)


def decode_notation(encoded: str) -> str:
    """Exact inverse of encode_notation; accepts either hex case."""
    out = bytearray()
    i = 0
    while i < len(encoded):
        ch = encoded[i]
        if ch == "%":
            hex_pair = encoded[i + 1:i + 3]
            if len(hex_pair) != 2 or any(c not in "0123456789abcdefABCDEF" for c in hex_pair):
                raise ValueError(f"bad percent-escape at offset {i}")
            out.append(int(hex_pair, 16))
            i += 3
        else:
            out.extend(ch.encode("utf-8"))
            i += 1
    return out.decode("utf-8")


@dataclass(frozen=True)
class ConceptUri:
    """Version-scoped concept identifier."""

    base: str
    version: str  # version label, or the reserved "composed" segment
    encoded_notation: str

    @property
    def rendered(self) -> str:
        return f"{self.base}/{self.version}/{self.encoded_notation}"

    @property
    def path(self) -> str:
        return f"/{self.version}/{self.encoded_notation}"


@dataclass(frozen=True)
class OpenSuperclass:
    """Sparse disclosure for blocked records: an open ancestor only."""

    notation: str
    uri: ConceptUri


@dataclass(frozen=True)
class ComponentStatus:
    notation: str
    kind: str
    status: str  # valid | deprecated | unknown | tier-blocked
    span: tuple[int, int]
    uri: Optional[ConceptUri] = None
    replaced_by: tuple[ConceptUri, ...] = ()
    open_superclass: Optional[OpenSuperclass] = None

    @property
    def resolvable(self) -> bool:
        return self.status in (VALID, DEPRECATED)


@dataclass(frozen=True)
class InterpretationReport:
    input: nt.Classmark
    tree: nt.ParseTree
    components: tuple[ComponentStatus, ...]
    composed_uri: Optional[ConceptUri]
    snapshot_version: VersionCode
    tier: DatasetTier


def record_uri(record: ConceptRecord, base_uri: str) -> ConceptUri:
    """The identity URI of one versioned record."""
    return ConceptUri(base=base_uri, version=record.introduced_in.label,
                      encoded_notation=encode_notation(record.notation))


def mint_uri(notation: str, snapshot: Snapshot, base_uri: str) -> ConceptUri:
    """URI of the record lineage currently designated by a notation.

    The version segment is the introduction version of the latest record, so
    for single-era notations this is the earliest version in which the
    notation appeared. Raises NotFound for absent notations.
    """
    recs = snapshot.by_notation.get(notation)
    if not recs:
        raise NotFound(notation)
    return record_uri(recs[-1], base_uri)


def composed_uri(classmark: nt.Classmark, base_uri: str) -> ConceptUri:
    return ConceptUri(base=base_uri, version=COMPOSED_SEGMENT,
                      encoded_notation=encode_notation(classmark.normalized))


def legacy_lookup(identifier: str, snapshot: Snapshot, base_uri: str) -> ConceptUri:
    """New-scheme URI for a legacy record identifier; identity mapping, never
    the replacement."""
    record = snapshot.legacy_ids.get(identifier)
    if record is None:
        raise NotFound(identifier)
    return record_uri(record, base_uri)


def open_superclass_of(notation: str, snapshot: Snapshot, base_uri: str) -> Optional[OpenSuperclass]:
    """Nearest summary-tier ancestor, with its URI, when one exists."""
    ancestor = snapshot.nearest_open_superclass(notation)
    if ancestor is None:
        return None
    return OpenSuperclass(notation=ancestor, uri=mint_uri(ancestor, snapshot, base_uri))


def interpret(classmark: str | nt.Classmark, tier: DatasetTier, snapshot: Snapshot,
              base_uri: str, version: Optional[str] = None) -> InterpretationReport:
    """Parse a classmark and resolve every primitive component at a tier.

    Deprecated components carry their own URI plus the URIs of their
    transitive replacements; tier-blocked ones disclose only the nearest open
    superclass. Raises ParseError for unparseable input.
    """
    cm = nt.normalize(classmark) if isinstance(classmark, str) else classmark
    tree = nt.parse(cm)
    components = []
    for leaf in nt.leaves(tree):
        components.append(_component_status(leaf, tier, snapshot, base_uri, version))
    all_resolvable = all(c.resolvable for c in components)
    composed = composed_uri(cm, base_uri) if len(components) >= 2 and all_resolvable else None
    return InterpretationReport(
        input=cm,
        tree=tree,
        components=tuple(components),
        composed_uri=composed,
        snapshot_version=snapshot.latest_version,
        tier=tier,
    )


def _component_status(leaf: nt.Leaf, tier: DatasetTier, snapshot: Snapshot,
                      base_uri: str, version: Optional[str]) -> ComponentStatus:
    try:
        record = snapshot.get(leaf.text, tier, version)
    except TierBlocked:
        return ComponentStatus(
            notation=leaf.text, kind=leaf.kind, status=TIER_BLOCKED, span=leaf.span,
            open_superclass=open_superclass_of(leaf.text, snapshot, base_uri))
    except NotFound:
        return ComponentStatus(notation=leaf.text, kind=leaf.kind, status=UNKNOWN, span=leaf.span)
    uri = record_uri(record, base_uri)
    if not record.deprecated:
        return ComponentStatus(notation=leaf.text, kind=leaf.kind, status=VALID,
                               span=leaf.span, uri=uri)
    replacements = []
    for target in snapshot.resolve_redirects(leaf.text):
        try:
            replacements.append(mint_uri(target, snapshot, base_uri))
        except NotFound:
            continue  # dangling target, already in the integrity report
    return ComponentStatus(notation=leaf.text, kind=leaf.kind, status=DEPRECATED,
                           span=leaf.span, uri=uri, replaced_by=tuple(replacements))

"""SKOS-style RDF for concept records, interpretation reports, and
cross-scheme alignments, with deterministic Turtle and JSON serializations.

Concept records map to SKOS per a fixed fourteen-element table; scheme
sub-elements (udc:includingNote, udc:replacedBy, ...) live under
<base>/schema# and are declared rdfs:subPropertyOf their SKOS parents in
every document that uses them. Synthesized whole-classmark expressions get
structural predicates (operator, memberList, nonAuthoritative) in the same
schema namespace and are never presented as authoritative concepts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from . import notation as nt
from .resolver import InterpretationReport, mint_uri, record_uri
from .store import Alignment, ConceptRecord, NotFound, Snapshot

SKOS = "http://www.w3.org/2004/02/skos/core#"
OWL = "http://www.w3.org/2002/07/owl#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"


def schema_ns(base_uri: str) -> str:
    return base_uri + "/schema#"


@dataclass(frozen=True)
class Uri:
    value: str


@dataclass(frozen=True)
class BlankNode:
    label: str


@dataclass(frozen=True)
class Literal:
    value: str
    lang: Optional[str] = None
    datatype: Optional[str] = None  # full datatype URI


Term = Union[Uri, BlankNode, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Union[Uri, BlankNode]
    predicate: Uri
    object: Term


@dataclass
class Graph:
    """Insertion-ordered, duplicate-free triple set with a prefix table."""

    base_uri: str
    triples: list[Triple] = field(default_factory=list)
    _seen: set[Triple] = field(default_factory=set)
    _blank_counter: int = 0

    @property
    def prefixes(self) -> dict[str, str]:
        return {
            "rdf": RDF,
            "rdfs": RDFS,
            "skos": SKOS,
            "owl": OWL,
            "xsd": XSD,
            "udc": schema_ns(self.base_uri),
            "base": self.base_uri + "/",
        }

    def add(self, subject: Union[Uri, BlankNode], predicate: Uri, obj: Term) -> None:
        triple = Triple(subject, predicate, obj)
        if triple not in self._seen:
            self._seen.add(triple)
            self.triples.append(triple)

    def blank(self) -> BlankNode:
        node = BlankNode(f"b{self._blank_counter}")
        self._blank_counter += 1
        return node

    def merge(self, other: "Graph") -> None:
        for t in other.triples:
            self.add(t.subject, t.predicate, t.object)

    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self.triples)


# the fourteen-element mapping: scheme sub-elements and their SKOS parents
SUBPROPERTY_PARENTS = {
    "includingNote": "note",
    "applicationNote": "note",
    "revisionHistory": "historyNote",
    "introductionDate": "historyNote",
    "cancellationDate": "historyNote",
    "replacedBy": "historyNote",
    "lastrevisionDate": "historyNote",
}

_SKOS_PREDICATES = ("notation", "broader", "prefLabel", "scopeNote", "example",
                    "related", "note", "historyNote", "broadMatch", "narrowMatch",
                    "relatedMatch", "Concept")

_STRUCTURAL = ("operator", "memberList", "nonAuthoritative", "SynthesizedExpression")

ALIGNMENT_PREDICATES = {
    "identical": Uri(OWL + "sameAs"),
    "local-is-narrower": Uri(SKOS + "broadMatch"),  # the external resource is broader
    "local-is-broader": Uri(SKOS + "narrowMatch"),
    "related": Uri(SKOS + "relatedMatch"),
}


def skos(name: str) -> Uri:
    return Uri(SKOS + name)


def udc(name: str, base_uri: str) -> Uri:
    return Uri(schema_ns(base_uri) + name)


def concept_to_graph(record: ConceptRecord, snapshot: Snapshot, base_uri: str) -> Graph:
    """RDF for one versioned record: exactly the fourteen mapped elements."""
    g = Graph(base_uri=base_uri)
    _add_concept(g, record, snapshot, base_uri)
    return g


def _add_concept(g: Graph, record: ConceptRecord, snapshot: Snapshot, base_uri: str) -> None:
    subject = Uri(record_uri(record, base_uri).rendered)
    used_sub: list[str] = []

    def sub(name: str) -> Uri:
        if name not in used_sub:
            used_sub.append(name)
        return udc(name, base_uri)

    g.add(subject, Uri(RDF + "type"), skos("Concept"))
    g.add(subject, skos("notation"), Literal(record.notation))
    if record.broader and record.broader in snapshot.by_notation:
        g.add(subject, skos("broader"), Uri(mint_uri(record.broader, snapshot, base_uri).rendered))
    for lang in sorted(record.caption):
        g.add(subject, skos("prefLabel"), Literal(record.caption[lang], lang=lang))
    if record.including_note:
        g.add(subject, sub("includingNote"), Literal(record.including_note))
    if record.application_note:
        g.add(subject, sub("applicationNote"), Literal(record.application_note))
    if record.scope_note:
        g.add(subject, skos("scopeNote"), Literal(record.scope_note))
    for example in record.examples:
        g.add(subject, skos("example"), Literal(example))
    for ref in record.see_also:
        if ref in snapshot.by_notation:
            g.add(subject, skos("related"), Uri(mint_uri(ref, snapshot, base_uri).rendered))
    if record.revision_history:
        g.add(subject, sub("revisionHistory"), Literal(record.revision_history))
    if record.introduction_date:
        g.add(subject, sub("introductionDate"), _date(record.introduction_date))
    if record.cancellation_date:
        g.add(subject, sub("cancellationDate"), _date(record.cancellation_date))
    for target in record.replaced_by:
        if target in snapshot.by_notation:
            g.add(subject, sub("replacedBy"), Uri(mint_uri(target, snapshot, base_uri).rendered))
    if record.last_revision_date:
        g.add(subject, sub("lastrevisionDate"), _date(record.last_revision_date))

    for name in used_sub:
        g.add(udc(name, base_uri), Uri(RDFS + "subPropertyOf"),
              skos(SUBPROPERTY_PARENTS[name]))


def _date(value) -> Literal:
    return Literal(value.isoformat(), datatype=XSD + "date")


def report_to_graph(report: InterpretationReport, snapshot: Snapshot, base_uri: str,
                    version: Optional[str] = None) -> Graph:
    """RDF for an interpretation: each resolvable component's concept graph,
    plus (for multi-component classmarks) non-authoritative composed nodes
    mirroring the parse tree. `version` must match the interpretation's."""
    g = Graph(base_uri=base_uri)
    for component in report.components:
        if not component.resolvable:
            continue
        record = snapshot.get(component.notation, report.tier, version)
        _add_concept(g, record, snapshot, base_uri)
    if report.composed_uri is not None:
        uris = iter([c.uri for c in report.components])
        _add_composed(g, report.tree.root, uris, base_uri)
    return g


_OPERATORS = {
    nt.Attachment: "attachment",
    nt.Range: "range",
    nt.Coordination: "coordination",
    nt.Group: "group",
}


def _add_composed(g: Graph, node: nt.Node, leaf_uris, base_uri: str) -> Uri:
    """Composed node for a subtree; leaves consume their component URIs in
    tree order. Returns the subject standing for the subtree."""
    if isinstance(node, (nt.MainNumber, nt.CommonAuxiliary, nt.SpecialAuxiliary)):
        return Uri(next(leaf_uris).rendered)
    if isinstance(node, nt.Attachment):
        members = [node.base, *node.auxiliaries]
    elif isinstance(node, nt.Range):
        members = [node.low, node.high]
    elif isinstance(node, (nt.Relation, nt.Coordination)):
        members = list(node.members)
    elif isinstance(node, nt.Group):
        members = [node.inner]
    else:
        raise TypeError(f"not a parse node: {node!r}")

    member_terms = [_add_composed(g, m, leaf_uris, base_uri) for m in members]
    if isinstance(node, nt.Relation):
        operator = "ordered-relation" if node.ordered else "relation"
    else:
        operator = _OPERATORS[type(node)]

    subject = Uri(f"{base_uri}/composed/{_encode(nt.serialize(node))}")
    g.add(subject, Uri(RDF + "type"), udc("SynthesizedExpression", base_uri))
    g.add(subject, udc("operator", base_uri), Literal(operator))
    g.add(subject, udc("nonAuthoritative", base_uri),
          Literal("true", datatype=XSD + "boolean"))
    head: Term = Uri(RDF + "nil")
    for term in reversed(member_terms):
        cell = g.blank()
        g.add(cell, Uri(RDF + "first"), term)
        g.add(cell, Uri(RDF + "rest"), head)
        head = cell
    g.add(subject, udc("memberList", base_uri), head)
    return subject


def _encode(text: str) -> str:
    from .resolver import encode_notation
    return encode_notation(text)


def alignment_to_graph(alignment: Alignment, snapshot: Snapshot, base_uri: str) -> Graph:
    """Typed cross-scheme link; raises NotFound for an unresolvable local
    notation."""
    if alignment.local not in snapshot.by_notation:
        raise NotFound(alignment.local)
    g = Graph(base_uri=base_uri)
    subject = Uri(mint_uri(alignment.local, snapshot, base_uri).rendered)
    g.add(subject, ALIGNMENT_PREDICATES[alignment.relation], Uri(alignment.external))
    return g


# -- serialization -----------------------------------------------------------

_PREDICATE_ORDER = [
    RDF + "type",
    SKOS + "notation",
    SKOS + "broader",
    SKOS + "prefLabel",
    SKOS + "scopeNote",
    SKOS + "example",
    SKOS + "related",
    RDFS + "subPropertyOf",
    OWL + "sameAs",
    SKOS + "broadMatch",
    SKOS + "narrowMatch",
    SKOS + "relatedMatch",
    RDF + "first",
    RDF + "rest",
]


def _predicate_rank(graph: Graph, predicate: Uri) -> tuple:
    ns = schema_ns(graph.base_uri)
    table = list(_PREDICATE_ORDER)
    for name in ("includingNote", "applicationNote", "revisionHistory",
                 "introductionDate", "cancellationDate", "replacedBy",
                 "lastrevisionDate", "operator", "nonAuthoritative", "memberList"):
        table.append(ns + name)
    try:
        return (0, table.index(predicate.value), "")
    except ValueError:
        return (1, 0, predicate.value)  # stable fallback for unknown predicates


def _subject_rank(subject: Union[Uri, BlankNode]) -> tuple:
    if isinstance(subject, Uri):
        return (0, subject.value)
    return (1, len(subject.label), subject.label)


def _compact(graph: Graph, uri: str) -> Optional[str]:
    for prefix, ns in graph.prefixes.items():
        if uri.startswith(ns):
            local = uri[len(ns):]
            if local and _pn_local_ok(local):
                return f"{prefix}:{local}"
    return None


def _pn_local_ok(local: str) -> bool:
    if local[0].isdigit() or local[0] == "-" or local.endswith("."):
        return False
    return all(c.isalnum() or c in "_-." for c in local)


def _turtle_term(graph: Graph, term: Term) -> str:
    if isinstance(term, Uri):
        compact = _compact(graph, term.value)
        return compact if compact else f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    escaped = (term.value.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))
    rendered = f'"{escaped}"'
    if term.lang:
        return rendered + f"@{term.lang}"
    if term.datatype:
        compact = _compact(graph, term.datatype)
        return rendered + "^^" + (compact if compact else f"<{term.datatype}>")
    return rendered


def serialize_turtle(graph: Graph) -> str:
    """Deterministic Turtle: fixed prefix header, subjects ordered by URI,
    predicates in table order."""
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in graph.prefixes.items()]
    lines.append("")
    by_subject: dict = {}
    for t in graph.triples:
        by_subject.setdefault(t.subject, []).append(t)
    for subject in sorted(by_subject, key=_subject_rank):
        by_predicate: dict = {}
        for t in by_subject[subject]:
            by_predicate.setdefault(t.predicate, []).append(t.object)
        pred_lines = []
        for predicate in sorted(by_predicate, key=lambda p: _predicate_rank(graph, p)):
            objects = sorted(_turtle_term(graph, o) for o in by_predicate[predicate])
            pred_lines.append(f"    {_turtle_term(graph, predicate)} {' , '.join(objects)}")
        lines.append(f"{_turtle_term(graph, subject)}")
        lines.append(" ;\n".join(pred_lines) + " .")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def serialize_json(graph: Graph) -> str:
    """Deterministic JSON projection: one object per subject, compact
    predicate keys, values as typed term objects."""
    by_subject: dict = {}
    for t in graph.triples:
        by_subject.setdefault(t.subject, []).append(t)
    doc = {}
    for subject in sorted(by_subject, key=_subject_rank):
        key = subject.value if isinstance(subject, Uri) else f"_:{subject.label}"
        by_predicate: dict = {}
        for t in by_subject[subject]:
            by_predicate.setdefault(t.predicate, []).append(t.object)
        entry = {}
        for predicate in sorted(by_predicate, key=lambda p: _predicate_rank(graph, p)):
            pkey = _compact(graph, predicate.value) or predicate.value
            values = sorted((_json_term(graph, o) for o in by_predicate[predicate]),
                            key=lambda v: (v["type"], v["value"],
                                           v.get("lang", ""), v.get("datatype", "")))
            entry[pkey] = values
        doc[key] = entry
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _json_term(graph: Graph, term: Term) -> dict:
    if isinstance(term, Uri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": f"_:{term.label}"}
    out = {"type": "literal", "value": term.value}
    if term.lang:
        out["lang"] = term.lang
    if term.datatype:
        out["datatype"] = _compact(graph, term.datatype) or term.datatype
    return out

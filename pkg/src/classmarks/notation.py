"""Classmark grammar: normalization, parsing, and round-trip serialization.

A classmark combines primitive class codes with connector signs. The grammar,
in precedence order (loosest first):

    expr         = coordination
    coordination = relation ( "+" relation )*
    relation     = range ( ("::" | ":") range )*
    range        = unit ( "/" unit )*
    unit         = base attached*
    base         = "[" expr "]"  |  common-aux  |  main
    main         = digit-run alpha-ext? star-suffix?

    attached     = common-aux | special-aux
    common-aux   = "=" digit-run                language
                 | "(" "=" digit-run ")"        ethnic
                 | "(" digit-run ")"            form if first digit 0, else place
                 | '"' time-body '"'            time
                 | "-" digit-run                property (first digit 0)
    special-aux  = "-" digit-run                hyphen (first digit 1-9)
                 | "." digit-run                point-zero (first digit 0)
                 | "'" digit-run                apostrophe

    digit-run    = groups of exactly three digits separated by ".",
                   final group 1-3 digits (dot grouping)
    alpha-ext    = uppercase letter, then ASCII letters
    star-suffix  = "*", then at least one letter/digit/dot
    time-body    = one or more of: digit, ASCII letter, space, "." "/" ":" "-"

Connectors are left-associative; "/" binds tighter than ":" and "::", which
bind tighter than "+". Auxiliaries bind tighter than every connector. A dot
inside a digit run is only consumed at a three-digit group boundary, so a
mid-group ".0" always reads as a point-zero special auxiliary.

Parsing is a pure function of the normalized input; trees serialize back to
exactly that input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

MAIN = "main"
LANGUAGE = "language"
ETHNIC = "ethnic"
PLACE = "place"
FORM = "form"
TIME = "time"
PROPERTY = "property"
HYPHEN = "hyphen"
POINT_ZERO = "point-zero"
APOSTROPHE = "apostrophe"

COMMON_KINDS = (LANGUAGE, ETHNIC, PLACE, FORM, TIME, PROPERTY)
SPECIAL_KINDS = (HYPHEN, POINT_ZERO, APOSTROPHE)

_DIGITS = set("0123456789")
_TIME_BODY = _DIGITS | set("./:- ") | {chr(c) for c in range(65, 91)} | {chr(c) for c in range(97, 123)}
_SUFFIX_CHARS = _DIGITS | set(".") | {chr(c) for c in range(65, 91)} | {chr(c) for c in range(97, 123)}


class ParseError(Exception):
    """Rejection of a classmark, with the offset where recognition failed."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at {position}: expected {expected}, found {found}")

    def caret_line(self, text: str) -> str:
        """Two-line rendering: the input with a caret under the failure offset."""
        return f"{text}\n{' ' * self.position}^"


@dataclass(frozen=True)
class Classmark:
    """A submitted classmark and its whitespace-normalized form."""

    raw: str
    normalized: str


@dataclass(frozen=True)
class MainNumber:
    digits: str
    alpha_ext: Optional[str] = None
    star_suffix: Optional[str] = None
    span: tuple[int, int] = (0, 0)

    @property
    def text(self) -> str:
        out = self.digits
        if self.alpha_ext:
            out += self.alpha_ext
        if self.star_suffix:
            out += "*" + self.star_suffix
        return out


@dataclass(frozen=True)
class CommonAuxiliary:
    kind: str  # one of COMMON_KINDS
    body: str  # full notation text, delimiters included, e.g. "(035)"
    span: tuple[int, int] = (0, 0)

    @property
    def text(self) -> str:
        return self.body


@dataclass(frozen=True)
class SpecialAuxiliary:
    kind: str  # one of SPECIAL_KINDS
    body: str  # marker included, e.g. "-1", ".05", "'63"
    attached_to: "Node" = None  # base of the enclosing attachment
    span: tuple[int, int] = (0, 0)

    @property
    def text(self) -> str:
        return self.body


@dataclass(frozen=True)
class Attachment:
    base: "Node"
    auxiliaries: tuple["Node", ...]


@dataclass(frozen=True)
class Range:
    low: "Node"
    high: "Node"


@dataclass(frozen=True)
class Relation:
    members: tuple["Node", ...]
    ordered: bool


@dataclass(frozen=True)
class Coordination:
    members: tuple["Node", ...]


@dataclass(frozen=True)
class Group:
    inner: "Node"


Node = Union[MainNumber, CommonAuxiliary, SpecialAuxiliary, Attachment, Range, Relation, Coordination, Group]


@dataclass(frozen=True)
class ParseTree:
    root: Node


@dataclass(frozen=True)
class Leaf:
    """One primitive component: its standalone notation, kind, and span."""

    text: str
    kind: str
    span: tuple[int, int]


def normalize(raw: str) -> Classmark:
    """Strip whitespace outside time-quote spans; raw text is kept alongside."""
    out = []
    in_quotes = False
    quote_open = -1
    for i, ch in enumerate(raw):
        if ch == '"':
            if not in_quotes:
                quote_open = i
            in_quotes = not in_quotes
            out.append(ch)
        elif ch.isspace() and not in_quotes:
            continue
        else:
            out.append(ch)
    if in_quotes:
        raise ParseError(quote_open, "closing '\"' for time span", "end of input")
    return Classmark(raw=raw, normalized="".join(out))


def check_dot_grouping(digits: str) -> bool:
    """True iff dots sit after every third digit and only there, no trailing dot."""
    if not digits:
        return False
    groups = digits.split(".")
    if any(not g or not all(c in _DIGITS for c in g) for g in groups):
        return False
    if any(len(g) != 3 for g in groups[:-1]):
        return False
    return 1 <= len(groups[-1]) <= 3


class _Parser:
    """Single-pass recursive descent over a normalized classmark."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    # -- character helpers --

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def fail(self, expected: str, position: Optional[int] = None) -> ParseError:
        pos = self.pos if position is None else position
        found = repr(self.text[pos]) if pos < len(self.text) else "end of input"
        return ParseError(pos, expected, found)

    # -- grammar levels, loosest binding first --

    def parse(self) -> ParseTree:
        if not self.text:
            raise self.fail("a classmark")
        root = self.coordination()
        if self.pos != len(self.text):
            raise self.fail("a connector or end of input")
        return ParseTree(root=root)

    def coordination(self) -> Node:
        members = [self.relation()]
        while self.peek() == "+":
            self.pos += 1
            members.append(self.relation())
        if len(members) == 1:
            return members[0]
        return Coordination(members=tuple(members))

    def relation(self) -> Node:
        members = [self.range()]
        ordered: Optional[bool] = None
        while self.peek() == ":":
            op_ordered = self.peek(1) == ":"
            self.pos += 2 if op_ordered else 1
            if ordered is not None and op_ordered != ordered:
                # connector kind changed: close the left part, nest leftward
                members = [Relation(members=tuple(members), ordered=ordered)]
            ordered = op_ordered
            members.append(self.range())
        if ordered is None:
            return members[0]
        return Relation(members=tuple(members), ordered=ordered)

    def range(self) -> Node:
        node = self.unit()
        while self.peek() == "/":
            self.pos += 1
            node = Range(low=node, high=self.unit())
        return node

    def unit(self) -> Node:
        base = self.base()
        auxiliaries: list[Node] = []
        while True:
            aux = self.try_attached(base)
            if aux is None:
                break
            auxiliaries.append(aux)
        if not auxiliaries:
            return base
        return Attachment(base=base, auxiliaries=tuple(auxiliaries))

    def base(self) -> Node:
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            inner = self.coordination()
            if self.peek() != "]":
                raise self.fail("']'")
            self.pos += 1
            return Group(inner=inner)
        if ch == "=" or ch == "(" or ch == '"':
            return self.common_aux()
        if ch == "-" and self.peek(1) == "0":
            return self.common_aux()
        if ch in _DIGITS:
            return self.main_number()
        raise self.fail("a classmark component")

    def main_number(self) -> Node:
        start = self.pos
        digits = self.digit_run()
        alpha_ext = None
        if "A" <= self.peek() <= "Z":
            ext_start = self.pos
            self.pos += 1
            while self.peek().isascii() and self.peek().isalpha():
                self.pos += 1
            alpha_ext = self.text[ext_start:self.pos]
        star_suffix = None
        if self.peek() == "*":
            self.pos += 1
            suf_start = self.pos
            while self.peek() in _SUFFIX_CHARS and self.peek():
                self.pos += 1
            if self.pos == suf_start:
                raise self.fail("letters or digits after '*'")
            star_suffix = self.text[suf_start:self.pos]
        return MainNumber(digits=digits, alpha_ext=alpha_ext, star_suffix=star_suffix,
                          span=(start, self.pos))

    def common_aux(self) -> Node:
        start = self.pos
        ch = self.peek()
        if ch == "=":
            self.pos += 1
            self.digit_run()
            return CommonAuxiliary(LANGUAGE, self.text[start:self.pos], span=(start, self.pos))
        if ch == "(":
            self.pos += 1
            if self.peek() == "=":
                kind = ETHNIC
                self.pos += 1
                self.digit_run()
            else:
                kind = FORM if self.peek() == "0" else PLACE
                self.digit_run()
            if self.peek() != ")":
                raise self.fail("')'")
            self.pos += 1
            return CommonAuxiliary(kind, self.text[start:self.pos], span=(start, self.pos))
        if ch == '"':
            self.pos += 1
            body_start = self.pos
            while self.peek() and self.peek() != '"':
                if self.peek() not in _TIME_BODY:
                    raise self.fail("a time-span character")
                self.pos += 1
            if self.peek() != '"':
                raise self.fail("closing '\"'")
            if self.pos == body_start:
                raise self.fail("a non-empty time span", position=body_start)
            self.pos += 1
            return CommonAuxiliary(TIME, self.text[start:self.pos], span=(start, self.pos))
        if ch == "-":  # property, first digit 0
            self.pos += 1
            self.digit_run()
            return CommonAuxiliary(PROPERTY, self.text[start:self.pos], span=(start, self.pos))
        raise self.fail("a common auxiliary")

    def try_attached(self, attached_to: Node) -> Optional[Node]:
        """Attached auxiliary if one starts here, else None (no consumption)."""
        ch = self.peek()
        if ch == "=" or ch == "(" or ch == '"':
            return self.common_aux()
        if ch == "-":
            if self.peek(1) == "0":
                return self.common_aux()
            if self.peek(1) in _DIGITS:
                return self.special_aux(attached_to)
            raise self.fail("digits after '-'", position=self.pos + 1)
        if ch == "'":
            return self.special_aux(attached_to)
        if ch == ".":
            nxt = self.peek(1)
            if nxt == "0":
                return self.special_aux(attached_to)
            # a dot the digit-run lexer refused: bad grouping or dangling dot
            if nxt in _DIGITS:
                raise self.fail("'.' only after a complete three-digit group")
            raise self.fail("digits after '.'", position=self.pos + 1)
        return None

    def special_aux(self, attached_to: Node) -> Node:
        start = self.pos
        ch = self.peek()
        if ch == "-":
            kind = HYPHEN
        elif ch == ".":
            kind = POINT_ZERO
        elif ch == "'":
            kind = APOSTROPHE
        else:
            raise self.fail("a special auxiliary")
        self.pos += 1
        self.digit_run()
        return SpecialAuxiliary(kind, self.text[start:self.pos], attached_to=attached_to,
                                span=(start, self.pos))

    def digit_run(self) -> str:
        """Digits with dot grouping enforced: a dot after every third digit.

        Stops (without consuming) at a dot that does not sit at a three-digit
        boundary or is not followed by a digit; the caller decides whether a
        point-zero auxiliary or an error follows.
        """
        start = self.pos
        if self.peek() not in _DIGITS:
            raise self.fail("a digit")
        group_len = 0
        while True:
            ch = self.peek()
            if ch in _DIGITS:
                if group_len == 3:
                    raise self.fail("'.' after a three-digit group")
                self.pos += 1
                group_len += 1
            elif ch == "." and group_len == 3 and self.peek(1) in _DIGITS:
                self.pos += 1
                group_len = 0
            else:
                break
        return self.text[start:self.pos]


def parse(classmark: Classmark | str) -> ParseTree:
    """Parse a normalized classmark into its component tree.

    Accepts a Classmark or a plain string (parsed as-is, no normalization).
    Raises ParseError with the failing offset and expectation.
    """
    text = classmark.normalized if isinstance(classmark, Classmark) else classmark
    return _Parser(text).parse()


def serialize(tree: ParseTree | Node) -> str:
    """Render a tree back to notation text; inverse of parse on its output."""
    node = tree.root if isinstance(tree, ParseTree) else tree
    return _serialize_node(node)


def _serialize_node(node: Node) -> str:
    if isinstance(node, MainNumber):
        return node.text
    if isinstance(node, (CommonAuxiliary, SpecialAuxiliary)):
        return node.body
    if isinstance(node, Attachment):
        return _serialize_node(node.base) + "".join(_serialize_node(a) for a in node.auxiliaries)
    if isinstance(node, Range):
        return _serialize_node(node.low) + "/" + _serialize_node(node.high)
    if isinstance(node, Relation):
        sep = "::" if node.ordered else ":"
        return sep.join(_serialize_node(m) for m in node.members)
    if isinstance(node, Coordination):
        return "+".join(_serialize_node(m) for m in node.members)
    if isinstance(node, Group):
        return "[" + _serialize_node(node.inner) + "]"
    raise TypeError(f"not a parse node: {node!r}")


def leaves(tree: ParseTree | Node) -> list[Leaf]:
    """Left-to-right primitive components, auxiliaries as standalone notations."""
    node = tree.root if isinstance(tree, ParseTree) else tree
    out: list[Leaf] = []
    _collect_leaves(node, out)
    return out


def _collect_leaves(node: Node, out: list[Leaf]) -> None:
    if isinstance(node, MainNumber):
        out.append(Leaf(text=node.text, kind=MAIN, span=node.span))
    elif isinstance(node, (CommonAuxiliary, SpecialAuxiliary)):
        out.append(Leaf(text=node.body, kind=f"{node.kind}-aux", span=node.span))
    elif isinstance(node, Attachment):
        _collect_leaves(node.base, out)
        for aux in node.auxiliaries:
            _collect_leaves(aux, out)
    elif isinstance(node, Range):
        _collect_leaves(node.low, out)
        _collect_leaves(node.high, out)
    elif isinstance(node, (Relation, Coordination)):
        for m in node.members:
            _collect_leaves(m, out)
    elif isinstance(node, Group):
        _collect_leaves(node.inner, out)
    else:
        raise TypeError(f"not a parse node: {node!r}")


def node_to_dict(node: ParseTree | Node) -> dict:
    """JSON-ready rendering of a tree, for the CLI and the HTML client."""
    if isinstance(node, ParseTree):
        return node_to_dict(node.root)
    if isinstance(node, MainNumber):
        return {"node": "main", "text": node.text, "span": list(node.span)}
    if isinstance(node, CommonAuxiliary):
        return {"node": "common-aux", "kind": node.kind, "text": node.body, "span": list(node.span)}
    if isinstance(node, SpecialAuxiliary):
        return {"node": "special-aux", "kind": node.kind, "text": node.body, "span": list(node.span)}
    if isinstance(node, Attachment):
        return {"node": "attachment", "base": node_to_dict(node.base),
                "auxiliaries": [node_to_dict(a) for a in node.auxiliaries]}
    if isinstance(node, Range):
        return {"node": "range", "members": [node_to_dict(node.low), node_to_dict(node.high)]}
    if isinstance(node, Relation):
        return {"node": "ordered-relation" if node.ordered else "relation",
                "members": [node_to_dict(m) for m in node.members]}
    if isinstance(node, Coordination):
        return {"node": "coordination", "members": [node_to_dict(m) for m in node.members]}
    if isinstance(node, Group):
        return {"node": "group", "members": [node_to_dict(node.inner)]}
    raise TypeError(f"not a parse node: {node!r}")

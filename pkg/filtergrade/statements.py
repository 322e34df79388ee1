#
# statements.py
#
# Session file grammar: collapsing ';'-terminated statements out of the source
# lines, parsing each statement into a Statement object, and printing parsed
# sessions back in canonical form.
#
#     ring R = Q[x,y,z] graded fine;
#     ideal a = (x^2, x*y);
#     module M = coker [[x, y], [0, x]] twists ((0,0,0), (1,0,0));
#     module N = cyclic (x*y, x*z) ++ cyclic (y^2) twist (0,1,0);
#     sequence s = [y, z];
#     fgrad a=a b=(y) M=R;
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import functools
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from filtergrade import fpmod
from filtergrade.errors import SessionSyntaxError, WindowSizeError
from filtergrade.filterreg import SEARCH_ORDERS
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import (
    Degree,
    DegreeWindow,
    Polynomial,
    RingDescriptor,
    field_name,
    make_field,
)

COMMAND_NAMES = (
    "fgrad",
    "filter-check",
    "find-seq",
    "artin-index",
    "artin-local",
    "all-artinian",
    "ext-finite",
    "att-top",
    "att-top-local",
    "cd-test",
    "ns-verify",
    "ns-compose-verify",
    "cech-table",
    "ext",
    "hilbert",
    "fdepth",
    "fgrad-module",
    "weak-seq",
    "cd-audit",
    "triple-check",
    "gamma",
    "resolve",
)

# argument keys whose values are bare words rather than bound names
WORD_ARGUMENTS = {"order": SEARCH_ORDERS}

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")
_INTEGER = re.compile(r"-?\d+")
_WINDOW_RANGE = re.compile(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")
_CLOSERS = {"(": ")", "[": "]"}


class StatementSource:
    """
    The text of one statement, comments and the terminating ';' removed, with
    the (line, column) of every character for diagnostics.
    """
    def __init__(self, chars: Sequence[str], positions: Sequence[tuple[int, int]]):
        start = 0
        end = len(chars)
        while start < end and chars[start].isspace():
            start += 1
        while end > start and chars[end - 1].isspace():
            end -= 1
        self.text = "".join(" " if c == "\n" else c for c in chars[start:end])
        self.positions = list(positions[start:end])
        self.end_position = positions[end - 1] if end else (0, 0)

    def where(self, offset: int) -> tuple[int, int]:
        if offset < len(self.positions):
            return self.positions[offset]
        line, column = self.end_position
        return line, column + 1

    def error(self, message: str, offset: int = 0) -> SessionSyntaxError:
        return SessionSyntaxError(message, *self.where(offset))

    def __bool__(self):
        return bool(self.text)


def collapse_statements(lines: Iterable[str]) -> Iterator[StatementSource]:
    """
    Group source lines into statements: a statement runs up to its ';', and
    may span several lines. '#' starts a comment that runs to end of line.
    """
    chars: list[str] = []
    positions: list[tuple[int, int]] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        for column, c in enumerate(line, start=1):
            if c == "#":
                break
            if c == ";":
                source = StatementSource(chars, positions)
                if source:
                    yield source
                chars, positions = [], []
                continue
            chars.append(c)
            positions.append((lineno, column))
        chars.append("\n")
        positions.append((lineno, len(line) + 1))

    source = StatementSource(chars, positions)
    if source:
        raise source.error("statement is not terminated by ';'")


# scanning helpers; offsets index into StatementSource.text

def _skip_space(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def _expect(source: StatementSource, i: int, literal: str) -> int:
    i = _skip_space(source.text, i)
    if not source.text.startswith(literal, i):
        raise source.error(f"expected {literal!r}", i)
    return i + len(literal)


def _identifier(source: StatementSource, i: int, what: str = "name") -> tuple[str, int]:
    i = _skip_space(source.text, i)
    match = _IDENTIFIER.match(source.text, i)
    if match is None:
        raise source.error(f"expected {what}", i)
    return match.group(), match.end()


def _bracketed(source: StatementSource, i: int) -> tuple[int, int, int]:
    """
    For the bracket opening at i, return (inner start, inner end, offset
    after the closing bracket).
    """
    text = source.text
    stack = []
    for j in range(i, len(text)):
        c = text[j]
        if c in _CLOSERS:
            stack.append(_CLOSERS[c])
        elif c in ")]":
            if not stack or stack.pop() != c:
                raise source.error(f"unbalanced {c!r}", j)
            if not stack:
                return i + 1, j, j + 1
    raise source.error(f"unclosed {text[i]!r}", i)


def _split_top(source: StatementSource, start: int, end: int, separator: str = ",") -> list[tuple[int, int]]:
    """Split text[start:end] at top-level separators into stripped (start, end) spans."""
    text = source.text
    if not text[start:end].strip():
        return []
    spans = []
    depth = 0
    piece = start
    j = start
    while j < end:
        c = text[j]
        if c in "([":
            depth += 1
        elif c in ")]":
            depth -= 1
        elif depth == 0 and text.startswith(separator, j):
            spans.append((piece, j))
            j += len(separator)
            piece = j
            continue
        j += 1
    spans.append((piece, end))

    stripped = []
    for s, e in spans:
        s = _skip_space(text, s)
        while e > s and text[e - 1].isspace():
            e -= 1
        if s == e:
            raise source.error("empty list item", s)
        stripped.append((s, e))
    return stripped


def _polynomial(source: StatementSource, span: tuple[int, int], ring: RingDescriptor) -> Polynomial:
    start, end = span
    try:
        poly = ring.parse(source.text[start:end])
    except ValueError as exc:
        raise source.error(str(exc), start) from None
    if not poly.is_homogeneous():
        raise source.error(f"inhomogeneous generator {poly}", start)
    return poly


def _polynomial_list(source: StatementSource, i: int, opener: str, ring: RingDescriptor) -> tuple[list[Polynomial], int]:
    i = _skip_space(source.text, i)
    if not source.text.startswith(opener, i):
        raise source.error(f"expected {opener!r}", i)
    start, end, after = _bracketed(source, i)
    return [_polynomial(source, span, ring) for span in _split_top(source, start, end)], after


def _degree(source: StatementSource, span: tuple[int, int], ring: RingDescriptor) -> Degree:
    start, end = span
    text = source.text[start:end].strip()
    try:
        if text.startswith("("):
            if not text.endswith(")"):
                raise ValueError(f"malformed degree {text!r}")
            value = tuple(int(v) for v in text[1:-1].split(","))
        else:
            value = int(text)
        return ring.as_degree(value)
    except ValueError as exc:
        raise source.error(f"ring mismatch: {exc}", start) from None


def _end_of_statement(source: StatementSource, i: int) -> None:
    i = _skip_space(source.text, i)
    if i < len(source.text):
        raise source.error(f"unexpected text {source.text[i:]!r}", i)


def _polys_text(polys: Iterable[Polynomial]) -> str:
    return ", ".join(str(p) for p in polys)


class Statement:
    """
    Base class for session statements. Subclasses give a regex `pattern`
    that recognizes their leading keyword, and a `build` classmethod that
    parses the rest.
    """
    pattern = ""
    match = staticmethod(lambda s: None)

    def __init_subclass__(cls):
        cls.match = re.compile(cls.pattern).match

    @classmethod
    def from_source(cls, source: StatementSource, session: Session) -> Statement:
        for subcls in cls.__subclasses__():
            match = subcls.match(source.text)
            if match:
                return subcls.build(source, match.end(), session)
        raise source.error(f"unrecognized statement {source.text.split()[0]!r}")

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> Statement:
        raise NotImplementedError

    @staticmethod
    def _binding_name(source: StatementSource, i: int, session: Session) -> tuple[str, int]:
        name, j = _identifier(source, i)
        if name in session.bindings or name == session.ring_name:
            raise source.error(f"name {name!r} is already bound", _skip_space(source.text, i))
        return name, _expect(source, j, "=")

    @staticmethod
    def _require_ring(source: StatementSource, session: Session) -> RingDescriptor:
        if session.ring is None:
            raise source.error("no ring declared before this statement")
        return session.ring


@dataclass
class RingStatement(Statement):
    pattern = r"ring\b"

    name: str
    ring: RingDescriptor

    _FORM = re.compile(
        r"\s+(?P<name>[A-Za-z_]\w*)\s*=\s*(?P<field>Q|GF\(\s*\d+\s*\))\s*\[(?P<vars>[^\]]*)\]"
        r"(?:\s+graded\s+(?P<grading>\w+))?"
        r"(?:\s+order\s+(?P<order>\w+))?\s*$"
    )

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> RingStatement:
        if session.ring is not None:
            raise source.error("a session has exactly one ring")
        if session.statements:
            raise source.error("the ring must be declared before any other statement")
        match = cls._FORM.match(source.text, i)
        if match is None:
            raise source.error("expected 'ring NAME = FIELD[vars] [graded standard|fine] [order degrevlex|lex]'", i)
        variables = [v.strip() for v in match["vars"].split(",")] if match["vars"].strip() else []
        try:
            field_ = make_field(match["field"])
            ring = RingDescriptor(
                tuple(variables),
                field_,
                match["grading"] or "standard",
                match["order"] or "degrevlex",
            )
        except ValueError as exc:
            raise source.error(str(exc), i) from None
        return cls(match["name"], ring)

    def __str__(self):
        ring = self.ring
        text = f"ring {self.name} = {field_name(ring.field)}[{','.join(ring.variables)}] graded {ring.grading}"
        if ring.order != "degrevlex":
            text += f" order {ring.order}"
        return text + ";"


@dataclass
class IdealStatement(Statement):
    pattern = r"ideal\b"

    name: str
    generators: list[Polynomial]

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> IdealStatement:
        ring = cls._require_ring(source, session)
        name, i = cls._binding_name(source, i, session)
        generators, i = _polynomial_list(source, i, "(", ring)
        _end_of_statement(source, i)
        return cls(name, generators)

    def __str__(self):
        return f"ideal {self.name} = ({_polys_text(self.generators)});"


@dataclass
class SequenceStatement(Statement):
    pattern = r"sequence\b"

    name: str
    elements: list[Polynomial]

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> SequenceStatement:
        ring = cls._require_ring(source, session)
        name, i = cls._binding_name(source, i, session)
        elements, i = _polynomial_list(source, i, "[", ring)
        _end_of_statement(source, i)
        return cls(name, elements)

    def __str__(self):
        return f"sequence {self.name} = [{_polys_text(self.elements)}];"


class CyclicPart(NamedTuple):
    generators: list[Polynomial]
    twist: Degree


@dataclass
class ModuleStatement(Statement):
    """
    A module binding, kept in the form it was written: a presentation matrix
    (rows are generators, columns are relations) with generator degrees, or a
    direct sum of twisted cyclic modules.
    """
    pattern = r"module\b"

    name: str
    ring: RingDescriptor
    kind: str
    rows: list[list[Polynomial]] = field(default_factory=list)
    twists: list[Degree] = field(default_factory=list)
    parts: list[CyclicPart] = field(default_factory=list)
    # offset of the matrix or first summand, where module-level errors point
    _anchor: int = field(default=0, repr=False, compare=False)

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> ModuleStatement:
        ring = cls._require_ring(source, session)
        name, i = cls._binding_name(source, i, session)
        kind, j = _identifier(source, i, "'coker' or 'cyclic'")
        if kind == "coker":
            statement = cls._build_coker(source, j, name, ring)
        elif kind == "cyclic":
            statement = cls._build_cyclic(source, _skip_space(source.text, i), name, ring)
        else:
            raise source.error("expected 'coker' or 'cyclic'", _skip_space(source.text, i))
        try:
            statement.presentation()
        except ValueError as exc:
            raise source.error(str(exc), statement._anchor) from None
        return statement

    @classmethod
    def _build_coker(cls, source: StatementSource, i: int, name: str, ring: RingDescriptor) -> ModuleStatement:
        text = source.text
        matrix_at = _skip_space(text, i)
        if not text.startswith("[", matrix_at):
            raise source.error("expected a matrix '[[...], ...]'", matrix_at)
        start, end, after = _bracketed(source, matrix_at)
        rows = []
        for row_start, row_end in _split_top(source, start, end):
            if text[row_start] != "[":
                raise source.error("matrix rows must be bracketed lists", matrix_at)
            inner_start, inner_end, row_after = _bracketed(source, row_start)
            if row_after != row_end:
                raise source.error("mismatched rows in matrix", matrix_at)
            rows.append([_polynomial(source, span, ring) for span in _split_top(source, inner_start, inner_end)])
        if len({len(r) for r in rows}) > 1:
            raise source.error("mismatched rows in matrix: rows have different lengths", matrix_at)

        twists = [ring.zero_degree] * len(rows)
        i = _skip_space(text, after)
        if text.startswith("twists", i):
            twists_at = i
            i = _skip_space(text, i + len("twists"))
            if not text.startswith("(", i):
                raise source.error("expected '(' after 'twists'", i)
            start, end, i = _bracketed(source, i)
            twists = [_degree(source, span, ring) for span in _split_top(source, start, end)]
            if len(twists) != len(rows):
                raise source.error(f"{len(rows)} matrix rows but {len(twists)} twists", twists_at)
        _end_of_statement(source, i)
        return cls(name, ring, "coker", rows=rows, twists=twists, _anchor=matrix_at)

    @classmethod
    def _build_cyclic(cls, source: StatementSource, i: int, name: str, ring: RingDescriptor) -> ModuleStatement:
        text = source.text
        parts = []
        for start, end in _split_top(source, i, len(text), "++"):
            j = _expect(source, start, "cyclic")
            generators, j = _polynomial_list(source, j, "(", ring)
            twist = ring.zero_degree
            j = _skip_space(text, j)
            if text.startswith("twist", j):
                twist = _degree(source, (j + len("twist"), end), ring)
                j = end
            if _skip_space(text, j) < end:
                raise source.error(f"unexpected text {text[j:end].strip()!r}", _skip_space(text, j))
            parts.append(CyclicPart(generators, twist))
        return cls(name, ring, "cyclic", parts=parts, _anchor=i)

    def presentation(self) -> ModulePresentation:
        if self.kind == "coker":
            return ModulePresentation.from_rows(self.ring, self.rows, self.twists)
        pieces = [ModulePresentation.cyclic(self.ring, part.generators, part.twist) for part in self.parts]
        return functools.reduce(fpmod.direct_sum, pieces)

    def __str__(self):
        ring = self.ring
        if self.kind == "coker":
            rows = ", ".join(f"[{_polys_text(row)}]" for row in self.rows)
            twists = ", ".join(ring.format_degree(t) for t in self.twists)
            return f"module {self.name} = coker [{rows}] twists ({twists});"
        parts = []
        for part in self.parts:
            piece = f"cyclic ({_polys_text(part.generators)})"
            if any(part.twist):
                piece += f" twist {ring.format_degree(part.twist)}"
            parts.append(piece)
        return f"module {self.name} = {' ++ '.join(parts)};"


class Argument(NamedTuple):
    """
    One key=value command argument. kind is one of "name", "ideal",
    "sequence", "window", "int", "bool", "word".
    """
    kind: str
    value: Union[str, int, bool, list[Polynomial], DegreeWindow]

    def __str__(self):
        if self.kind == "ideal":
            return f"({_polys_text(self.value)})"
        if self.kind == "sequence":
            return f"[{_polys_text(self.value)}]"
        if self.kind == "bool":
            return "true" if self.value else "false"
        return str(self.value)


@dataclass
class CommandStatement(Statement):
    pattern = r"[a-z][a-z0-9]*(-[a-z0-9]+)*\b"

    name: str
    arguments: dict[str, Argument] = field(default_factory=dict)

    @classmethod
    def build(cls, source: StatementSource, i: int, session: Session) -> CommandStatement:
        name = source.text[:i]
        if name not in COMMAND_NAMES:
            raise source.error(f"unknown command {name!r}")
        ring = cls._require_ring(source, session)
        text = source.text
        arguments = {}
        i = _skip_space(text, i)
        while i < len(text):
            match = _KEY.match(text, i)
            if match is None:
                raise source.error("expected key=value argument", i)
            key = match.group()
            if key in arguments:
                raise source.error(f"duplicate argument {key!r}", i)
            i = _skip_space(text, _expect(source, match.end(), "="))
            arguments[key], i = cls._value(source, i, key, ring, session)
            i = _skip_space(text, i)
        return cls(name, arguments)

    @staticmethod
    def _value(source: StatementSource, i: int, key: str, ring: RingDescriptor, session: Session) -> tuple[Argument, int]:
        text = source.text
        if i >= len(text):
            raise source.error(f"missing value for {key!r}", i)
        if text[i] == "(":
            generators, after = _polynomial_list(source, i, "(", ring)
            return Argument("ideal", generators), after
        if text[i] == "[":
            start, end, after = _bracketed(source, i)
            if ".." in text[start:end]:
                return Argument("window", _window(source, start, end, ring)), after
            elements, after = _polynomial_list(source, i, "[", ring)
            return Argument("sequence", elements), after

        end = i
        while end < len(text) and not text[end].isspace():
            end += 1
        token = text[i:end]
        if _INTEGER.fullmatch(token):
            return Argument("int", int(token)), end
        if token in ("true", "false"):
            return Argument("bool", token == "true"), end
        if key in WORD_ARGUMENTS:
            if token not in WORD_ARGUMENTS[key]:
                raise source.error(f"{key} must be one of {', '.join(WORD_ARGUMENTS[key])}", i)
            return Argument("word", token), end
        if not _IDENTIFIER.fullmatch(token):
            raise source.error(f"invalid value {token!r}", i)
        if token != session.ring_name and token not in session.bindings:
            raise source.error(f"unbound name {token!r}", i)
        return Argument("name", token), end

    def __str__(self):
        args = "".join(f" {key}={value}" for key, value in self.arguments.items())
        return f"{self.name}{args};"


def _window(source: StatementSource, start: int, end: int, ring: RingDescriptor) -> DegreeWindow:
    spans = _split_top(source, start, end)
    ranges = []
    for s, e in spans:
        match = _WINDOW_RANGE.match(source.text[s:e])
        if match is None:
            raise source.error("expected a window range lo..hi", s)
        ranges.append((int(match[1]), int(match[2])))
    length = ring.degree_length
    if len(ranges) == 1:
        ranges *= length
    if len(ranges) != length:
        raise source.error(f"ring mismatch: window needs {length} ranges, got {len(ranges)}", start)
    try:
        return DegreeWindow(tuple(lo for lo, _ in ranges), tuple(hi for _, hi in ranges))
    except (ValueError, WindowSizeError) as exc:
        raise source.error(str(exc), start) from None


@dataclass
class Session:
    ring_name: Optional[str] = None
    ring: Optional[RingDescriptor] = None
    bindings: dict[str, Statement] = field(default_factory=dict)
    commands: list[CommandStatement] = field(default_factory=list)
    statements: list[Statement] = field(default_factory=list)

    def add(self, statement: Statement) -> None:
        if isinstance(statement, RingStatement):
            self.ring_name, self.ring = statement.name, statement.ring
        elif isinstance(statement, CommandStatement):
            self.commands.append(statement)
        else:
            self.bindings[statement.name] = statement
        self.statements.append(statement)

    def __str__(self):
        return "".join(f"{statement}\n" for statement in self.statements)


def parse_session(text: Union[str, Iterable[str]]) -> Session:
    """
    Parse session source text (or an iterable of its lines) into a Session.
    Raises SessionSyntaxError carrying the line and column of the problem.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    session = Session()
    for source in collapse_statements(lines):
        session.add(Statement.from_source(source, session))
    return session

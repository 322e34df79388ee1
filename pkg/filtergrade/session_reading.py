#
# session_reading.py
#
# Sources of session text: .fg files, gzip-compressed .fg.gz files, and the
# built-in demo sessions. A source streams its lines straight into the
# statement collapser, so syntax errors carry the line numbers of the
# original file.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import abc
import gzip
import logging
from collections.abc import Iterator
from pathlib import Path

from filtergrade import demo
from filtergrade.statements import Session, StatementSource, collapse_statements, parse_session

logger = logging.getLogger(__name__)


class SessionSource(abc.ABC):
    """
    A named session. Subclasses declare the file name `suffix` they handle;
    names with no matching suffix are read as plain session files.
    """
    suffix = ""
    _by_suffix: dict[str, type[SessionSource]] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.suffix:
            SessionSource._by_suffix[cls.suffix] = cls

    @classmethod
    def for_name(cls, name: str, encoding: str = "utf-8") -> SessionSource:
        for suffix, source_class in cls._by_suffix.items():
            if name.endswith(suffix):
                return source_class(name, encoding)
        return FileSessionSource(name, encoding)

    def __init__(self, name: str, encoding: str):
        self.name = name
        self.encoding = encoding

    @property
    def stem(self) -> str:
        """File name up to its first '.', used to prefix report files."""
        return Path(self.name).name.partition(".")[0]

    @abc.abstractmethod
    def lines(self) -> Iterator[str]:
        """Source lines without terminators; any open file is closed once they run out."""

    def statements(self) -> Iterator[StatementSource]:
        return collapse_statements(self.lines())

    def parse(self) -> Session:
        session = parse_session(self.lines())
        logger.info("%s: %d statements, %d commands", self.name, len(session.statements), len(session.commands))
        return session


class FileSessionSource(SessionSource):
    def lines(self) -> Iterator[str]:
        with open(self.name, encoding=self.encoding) as session_file:
            for line in session_file:
                yield line.rstrip("\r\n")


class GzipSessionSource(SessionSource):
    suffix = ".gz"

    def lines(self) -> Iterator[str]:
        with gzip.open(self.name, "rt", encoding=self.encoding) as session_file:
            for line in session_file:
                yield line.rstrip("\r\n")


class DemoSessionSource(SessionSource):
    suffix = ".demo"

    def __init__(self, name: str, encoding: str):
        super().__init__(name, encoding)
        self.body = getattr(demo, self.stem, None)
        if not isinstance(self.body, str):
            raise ValueError(f"no demo session named {self.stem!r}")

    def lines(self) -> Iterator[str]:
        yield from self.body.splitlines()

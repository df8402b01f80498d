"""Exceptions and the structured warning record shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class AnalysisError(Exception):
    """Base class for every fatal condition raised by this package."""


class ParseError(AnalysisError):
    """Source text could not be analyzed.  Carries path/line/column."""

    def __init__(self, message: str, path: str = "", line: int = 0, column: int = 0):
        self.path = path
        self.line = line
        self.column = column
        where = path or "<source>"
        if line:
            where += ":%d:%d" % (line, column)
        super().__init__("%s: %s" % (where, message))


class UnterminatedComment(ParseError):
    pass


class UnterminatedString(ParseError):
    pass


class XmlMalformed(AnalysisError):
    """A project file is not well-formed XML; the whole file is rejected."""


class EmptySample(AnalysisError):
    """Aggregation was asked to summarize zero POUs."""


class WeightSumViolation(AnalysisError):
    """A weight profile does not sum to exactly 1."""


class NoPousFound(AnalysisError):
    """The input paths produced no analyzable POU at all."""


class InvalidConfig(AnalysisError):
    """The configuration file is malformed or violates a constraint."""


# Warning codes that mean a POU or file was dropped from the report.
SKIP_CODES = frozenset(
    {
        "il-body-skipped",
        "pou-parse-error",
        "xml-malformed",
        "body-language-unsupported",
    }
)


@dataclass(frozen=True)
class AnalysisWarning:
    """Non-fatal diagnostic attached to a run.

    code is a stable machine-readable slug; path/pou narrow the context
    when known.
    """

    code: str
    message: str
    path: str = ""
    pou: str = ""

    def render(self) -> str:
        ctx = ":".join(p for p in (self.path, self.pou) if p)
        return "[%s] %s%s" % (self.code, ctx + ": " if ctx else "", self.message)

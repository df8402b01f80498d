"""Language-neutral intermediate representation for analyzed POUs.

Every frontend (textual ST, PLCopen TC6 XML) reduces a program
organization unit to the same small set of frozen records: declared
variables, a classified token stream, decision points, call sites and
external data accesses.  Everything downstream (metrics, aggregation,
reporting) is a pure function over these records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class PouKind(Enum):
    PROGRAM = "Program"
    FUNCTION_BLOCK = "FunctionBlock"
    FUNCTION = "Function"
    ORGANIZATION_BLOCK = "OrganizationBlock"


class Language(Enum):
    ST = "ST"
    LD = "LD"
    FBD = "FBD"
    SFC = "SFC"


class VarSection(Enum):
    INPUT = "Input"
    OUTPUT = "Output"
    IN_OUT = "InOut"
    LOCAL = "Local"
    TEMP = "Temp"
    EXTERNAL = "External"
    GLOBAL = "Global"


class TypeClass(Enum):
    SIMPLE = "Simple"
    COMPLEX = "Complex"


class TokenClass(Enum):
    OPERATOR = "Operator"
    OPERAND = "Operand"


@dataclass(frozen=True)
class SourceRef:
    """Location of a construct: file path plus 1-based line/column.

    Graphical bodies have no lines; they carry the element's localId in
    `element` and leave line/column at 0.
    """

    path: str = ""
    line: int = 0
    column: int = 0
    element: str = ""


@dataclass(frozen=True)
class Token:
    """One classified lexical element of a POU body.

    identity_key is the case-folded identity used for vocabulary
    counting; two tokens with equal identity_key and equal cls are one
    unique symbol.
    """

    lexeme: str
    cls: TokenClass
    identity_key: str

    @staticmethod
    def operator(lexeme: str, identity: str | None = None) -> "Token":
        return Token(lexeme, TokenClass.OPERATOR, (identity if identity is not None else lexeme).casefold())

    @staticmethod
    def operand(lexeme: str, identity: str | None = None) -> "Token":
        return Token(lexeme, TokenClass.OPERAND, (identity if identity is not None else lexeme).casefold())


@dataclass(frozen=True)
class SubVariable:
    """First-level member of a structured variable (field, array element,
    or FB interface member).  Deeper nesting is deliberately not modeled."""

    name: str
    type_name: str


@dataclass(frozen=True)
class VariableDecl:
    name: str
    section: VarSection
    type_class: TypeClass
    type_name: str
    sub_variables: tuple[SubVariable, ...] = ()


@dataclass(frozen=True)
class CallSite:
    """One invocation of another POU.

    args_passed counts actual parameters handed over; returns_used counts
    consumed results (function value, wired or => outputs, distinct FB
    output members read back).
    """

    callee: str
    args_passed: int
    returns_used: int


@dataclass(frozen=True)
class DecisionSpan:
    """Source span of one decision point, labeled by construct kind."""

    kind: str
    ref: SourceRef


@dataclass(frozen=True)
class BodyFacts:
    tokens: tuple[Token, ...] = ()
    decision_count: int = 0
    decision_spans: tuple[DecisionSpan, ...] = ()
    calls: tuple[CallSite, ...] = ()
    external_reads: frozenset[str] = frozenset()
    external_writes: frozenset[str] = frozenset()

    @staticmethod
    def build(
        tokens=(),
        decisions=(),
        calls=(),
        external_reads=(),
        external_writes=(),
    ) -> "BodyFacts":
        """Constructor that keeps decision_count and the span list in sync."""
        spans = tuple(decisions)
        return BodyFacts(
            tokens=tuple(tokens),
            decision_count=len(spans),
            decision_spans=spans,
            calls=tuple(calls),
            external_reads=frozenset(external_reads),
            external_writes=frozenset(external_writes),
        )


@dataclass(frozen=True)
class Pou:
    name: str
    kind: PouKind
    language: Language
    variables: tuple[VariableDecl, ...] = ()
    body: BodyFacts = field(default_factory=BodyFacts)
    source_ref: SourceRef = field(default_factory=SourceRef)


# ------------------------- validation -------------------------


def validate_pou(pou: Pou) -> list[str]:
    """Return every invariant violation found in `pou` (empty list: valid).

    Violations indicate frontend bugs, not bad user input, so they are
    reported as strings for diagnostics rather than raised.
    """
    problems: list[str] = []
    if not pou.name:
        problems.append("pou name is empty")

    for var in pou.variables:
        if var.sub_variables and var.type_class is not TypeClass.COMPLEX:
            problems.append(
                "variable %r is %s but carries %d sub-variables"
                % (var.name, var.type_class.value, len(var.sub_variables))
            )
        if not var.name:
            problems.append("variable with empty name in section %s" % var.section.value)

    body = pou.body
    if body.decision_count != len(body.decision_spans):
        problems.append(
            "decision count %d does not match %d recorded spans"
            % (body.decision_count, len(body.decision_spans))
        )

    seen: dict[str, TokenClass] = {}
    flagged: set[str] = set()
    for tok in body.tokens:
        prior = seen.setdefault(tok.identity_key, tok.cls)
        if prior is not tok.cls and tok.identity_key not in flagged:
            flagged.add(tok.identity_key)
            problems.append(
                "identity %r classified as both operator and operand" % tok.identity_key
            )

    for call in body.calls:
        if not call.callee:
            problems.append("call site with empty callee")
        if call.args_passed < 0 or call.returns_used < 0:
            problems.append("call site %r with negative counts" % call.callee)

    return problems

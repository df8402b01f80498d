"""Structured Text frontend.

Turns textual ST source (POUs, TYPE blocks, VAR_GLOBAL lists) into the
shared IR.  The body walker is a small recursive-descent parser that
emits one classified token per lexical element, records decision points
with their source spans, collects call sites and tracks which external
names are read or written.

Classification rules for bodies:

* operands: identifiers, literals (numeric, string, time/date, typed,
  TRUE/FALSE), direct addresses, enum values, formal parameter names;
* operators: arithmetic + - * / MOD **, comparisons = <> < <= > >=,
  boolean AND OR XOR NOT (& folds to AND), := and =>, the separators
  ; and , and the subrange .., member access . (per use), index access
  (one per bracket pair), expression grouping (one per paren pair),
  invocation (the callee name is the operator; its argument parens are
  part of it), and each compound construct once: IF, each ELSIF, ELSE,
  CASE, FOR, WHILE, REPEAT, RETURN, EXIT, CONTINUE.

THEN/DO/OF/TO/BY/UNTIL, END_* keywords and CASE label colons are folded
into their construct's token.  Comments and {pragmas} produce nothing.

Decision points: IF, each ELSIF, each CASE label group (ELSE never),
FOR, WHILE, REPEAT, EXIT.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import AnalysisWarning, ParseError, UnterminatedComment, UnterminatedString
from .ir import (
    BodyFacts,
    CallSite,
    DecisionSpan,
    Language,
    Pou,
    PouKind,
    SourceRef,
    Token,
    VariableDecl,
    VarSection,
)
from .typesys import TypeContext, TypeSpec, named

# ---------------------- raw lexer ----------------------

_RE_WS = re.compile(r"[ \t\r\n]+")
_RE_ADDRESS = re.compile(r"%[IQMiqm][XBWDLxbwdl]?\d+(?:\.\d+)*")
_RE_TYPED = re.compile(r"[A-Za-z_][A-Za-z0-9_]*#(?:\d[\d_]*#)?[0-9A-Za-z_.:+-]+")
_RE_BASED = re.compile(r"\d[\d_]*#[0-9A-Fa-f_]+")
_RE_REAL = re.compile(r"\d[\d_]*\.\d[\d_]*(?:[eE][+-]?\d+)?")
_RE_EXPINT = re.compile(r"\d[\d_]*[eE][+-]?\d+")
_RE_INT = re.compile(r"\d[\d_]*")
_RE_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_MULTI_OPS = (":=", "=>", "<>", "<=", ">=", "**", "..")
_SINGLE_OPS = frozenset("+-*/=<>()[];,.:&")


@dataclass(frozen=True)
class RawTok:
    kind: str  # ident | number | string | address | op
    text: str
    line: int
    col: int

    def up(self) -> str:
        return self.text.upper() if self.kind == "ident" else ""


def lex(text: str, path: str = "") -> list[RawTok]:
    """Split ST source into raw tokens, dropping comments and pragmas."""
    toks: list[RawTok] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def advance(span: str):
        nonlocal line, col
        nl = span.count("\n")
        if nl:
            line += nl
            col = len(span) - span.rfind("\n")
        else:
            col += len(span)

    while i < n:
        ch = text[i]
        m = _RE_WS.match(text, i)
        if m:
            advance(m.group())
            i = m.end()
            continue
        if text.startswith("(*", i):
            start_line, start_col = line, col
            depth, j = 1, i + 2
            while j < n and depth:
                if text.startswith("(*", j):
                    depth += 1
                    j += 2
                elif text.startswith("*)", j):
                    depth -= 1
                    j += 2
                else:
                    j += 1
            if depth:
                raise UnterminatedComment("comment opened here is never closed", path, start_line, start_col)
            advance(text[i:j])
            i = j
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            advance(text[i:j])
            i = j
            continue
        if ch == "{":
            j = text.find("}", i)
            if j < 0:
                raise ParseError("unterminated pragma", path, line, col)
            advance(text[i : j + 1])
            i = j + 1
            continue
        if ch in "'\"":
            quote = ch
            start_line, start_col = line, col
            j = i + 1
            while j < n:
                c = text[j]
                if c == "$":
                    j += 2
                    continue
                if c == "\n":
                    break
                if c == quote:
                    break
                j += 1
            if j >= n or text[j] != quote:
                raise UnterminatedString("string literal is never closed", path, start_line, start_col)
            tok_text = text[i : j + 1]
            toks.append(RawTok("string", tok_text, line, col))
            advance(tok_text)
            i = j + 1
            continue
        m = _RE_ADDRESS.match(text, i)
        if m:
            toks.append(RawTok("address", m.group(), line, col))
            advance(m.group())
            i = m.end()
            continue
        for pattern, kind in ((_RE_TYPED, "number"), (_RE_BASED, "number"), (_RE_REAL, "number"), (_RE_EXPINT, "number"), (_RE_INT, "number")):
            m = pattern.match(text, i)
            if m:
                toks.append(RawTok(kind, m.group(), line, col))
                advance(m.group())
                i = m.end()
                break
        else:
            m = _RE_IDENT.match(text, i)
            if m:
                toks.append(RawTok("ident", m.group(), line, col))
                advance(m.group())
                i = m.end()
                continue
            two = text[i : i + 2]
            if two in _MULTI_OPS:
                toks.append(RawTok("op", two, line, col))
                advance(two)
                i += 2
                continue
            if ch in _SINGLE_OPS:
                toks.append(RawTok("op", ch, line, col))
                advance(ch)
                i += 1
                continue
            raise ParseError("unexpected character %r" % ch, path, line, col)
        continue
    return toks


# ---------------------- body walker ----------------------

_STMT_START = frozenset({"IF", "CASE", "FOR", "WHILE", "REPEAT", "RETURN", "EXIT", "CONTINUE"})
_BOOL_BINARY = {"AND": "and", "OR": "or", "XOR": "xor", "MOD": "mod"}
# words that can never be part of a CASE label group
_LABEL_BREAKERS = _STMT_START | frozenset(
    {"ELSE", "ELSIF", "THEN", "DO", "OF", "TO", "BY", "UNTIL", "AND", "OR", "XOR", "NOT", "MOD"}
)
_COMPARE_OPS = frozenset({"=", "<>", "<", "<=", ">", ">="})
_ADD_OPS = frozenset({"+", "-"})
_MUL_OPS = frozenset({"*", "/"})

_DECISION_CONSTRUCTS = frozenset({"if", "elsif", "for", "while", "repeat", "exit"})


@dataclass
class _RawCall:
    callee: str
    key: str
    args: int
    returns: int


@dataclass
class _BodyResult:
    tokens: list[Token] = field(default_factory=list)
    decisions: list[DecisionSpan] = field(default_factory=list)
    calls: list[_RawCall] = field(default_factory=list)
    reads: set[str] = field(default_factory=set)
    writes: set[str] = field(default_factory=set)
    member_reads: dict[str, set[str]] = field(default_factory=dict)


_EOF = RawTok("eof", "", 0, 0)


class _BodyParser:
    """Statement-list walker over raw tokens.  Emits classified tokens in
    source order; never builds an AST."""

    def __init__(self, toks: list[RawTok], path: str, fb_instances: dict[str, frozenset[str]] | None = None):
        self.toks = toks
        self.path = path
        self.i = 0
        self.res = _BodyResult()
        # casefolded instance name -> casefolded output member names
        self.fb_instances = fb_instances or {}
        # set when the last parsed statement was a bare invocation
        self.last_bare_call: _RawCall | None = None

    # --- token plumbing ---

    def cur(self) -> RawTok:
        return self.toks[self.i] if self.i < len(self.toks) else _EOF

    def peek(self, k: int = 1) -> RawTok:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else _EOF

    def take(self) -> RawTok:
        t = self.cur()
        self.i += 1
        return t

    def fail(self, message: str) -> ParseError:
        t = self.cur()
        return ParseError(message, self.path, t.line, t.col)

    def expect_kw(self, word: str) -> RawTok:
        t = self.cur()
        if t.up() != word:
            raise self.fail("expected %s, found %r" % (word, t.text or "end of body"))
        return self.take()

    def expect_op(self, op: str) -> RawTok:
        t = self.cur()
        if not (t.kind == "op" and t.text == op):
            raise self.fail("expected %r, found %r" % (op, t.text or "end of body"))
        return self.take()

    # --- emission ---

    def op(self, tok: RawTok, identity: str | None = None):
        self.res.tokens.append(Token.operator(tok.text, identity))

    def operand(self, tok: RawTok):
        self.res.tokens.append(Token.operand(tok.text))

    def decision(self, kind: str, tok: RawTok):
        self.res.decisions.append(DecisionSpan(kind, SourceRef(self.path, tok.line, tok.col)))

    # --- statements ---

    def parse_body(self):
        self.stmt_list(frozenset())
        if self.cur() is not _EOF and self.i < len(self.toks):
            raise self.fail("unexpected %r" % self.cur().text)

    def stmt_list(self, stop: frozenset[str]):
        while True:
            t = self.cur()
            if t.kind == "eof" or (t.kind == "ident" and t.up() in stop):
                return
            self.statement()

    def statement(self):
        t = self.cur()
        if t.kind == "op" and t.text == ";":
            self.op(self.take())
            return
        word = t.up()
        if word == "IF":
            self.if_statement()
        elif word == "CASE":
            self.case_statement()
        elif word == "FOR":
            self.for_statement()
        elif word == "WHILE":
            self.while_statement()
        elif word == "REPEAT":
            self.repeat_statement()
        elif word in ("RETURN", "EXIT", "CONTINUE"):
            kw = self.take()
            self.op(kw, word.lower())
            if word == "EXIT":
                self.decision("exit", kw)
            self.end_of_statement()
        elif word in ("ELSE", "ELSIF", "UNTIL") or word.startswith("END_"):
            raise self.fail("unexpected %s" % word)
        else:
            self.expr_statement()

    def end_of_statement(self):
        t = self.cur()
        if t.kind == "op" and t.text == ";":
            self.op(self.take())
        elif t.kind == "eof" or (t.kind == "ident" and (t.up().startswith("END_") or t.up() in ("ELSE", "ELSIF", "UNTIL"))):
            return  # fragment or last statement before a construct close
        else:
            raise self.fail("expected ';'")

    def expr_statement(self):
        t = self.cur()
        if t.kind not in ("ident", "address"):
            raise self.fail("unexpected %r" % (t.text or "end of body"))
        self.last_bare_call = None
        ref = self.reference(register=None)
        nxt = self.cur()
        if nxt.kind == "op" and nxt.text == ":=":
            if ref.is_call:
                raise self.fail("cannot assign to a call result")
            self.op(self.take())
            self.res.writes.add(ref.root_key)
            self.expression()
            self.end_of_statement()
            return
        ends_here = (
            nxt.kind == "eof"
            or (nxt.kind == "op" and nxt.text == ";")
            or (nxt.kind == "ident" and (nxt.up().startswith("END_") or nxt.up() in ("ELSE", "ELSIF", "UNTIL")))
        )
        if ref.is_call:
            if ends_here:
                self.last_bare_call = ref.call
            elif ref.call is not None:
                ref.call.returns += 1  # the value feeds a larger expression
        else:
            self.register_ref_read(ref)
        self.continue_binary(0)
        self.end_of_statement()

    def if_statement(self):
        kw = self.expect_kw("IF")
        self.op(kw, "if")
        self.decision("if", kw)
        self.expression()
        self.expect_kw("THEN")
        self.stmt_list(frozenset({"ELSIF", "ELSE", "END_IF"}))
        while self.cur().up() == "ELSIF":
            kw = self.take()
            self.op(kw, "elsif")
            self.decision("elsif", kw)
            self.expression()
            self.expect_kw("THEN")
            self.stmt_list(frozenset({"ELSIF", "ELSE", "END_IF"}))
        if self.cur().up() == "ELSE":
            self.op(self.take(), "else")
            self.stmt_list(frozenset({"END_IF"}))
        self.expect_kw("END_IF")

    def case_statement(self):
        kw = self.expect_kw("CASE")
        self.op(kw, "case")
        self.expression()
        self.expect_kw("OF")
        stops = frozenset({"ELSE", "END_CASE"})
        while True:
            t = self.cur()
            if t.kind == "eof":
                raise self.fail("unterminated CASE")
            if t.kind == "ident" and t.up() in stops:
                break
            self.case_group()
        if self.cur().up() == "ELSE":
            self.op(self.take(), "else")
            self.stmt_list(frozenset({"END_CASE"}))
        self.expect_kw("END_CASE")

    def case_group(self):
        self.decision("case-label", self.cur())
        self.case_label_atom()
        while True:
            t = self.cur()
            if t.kind == "op" and t.text == ",":
                self.op(self.take())
                self.case_label_atom()
            elif t.kind == "op" and t.text == "..":
                self.op(self.take())
                self.case_label_atom()
            else:
                break
        self.expect_op(":")  # label colon folds into the CASE construct
        self.stmt_list_until_label(frozenset({"ELSE", "END_CASE"}))

    def case_label_atom(self):
        t = self.cur()
        if t.kind == "op" and t.text in ("-", "+"):
            self.op(self.take())
            t = self.cur()
        if t.kind in ("number", "string"):
            self.operand(self.take())
        elif t.kind == "ident":
            self.operand(self.take())  # enum value or named constant
        else:
            raise self.fail("expected CASE label")

    def stmt_list_until_label(self, stop: frozenset[str]):
        while True:
            t = self.cur()
            if t.kind == "eof" or (t.kind == "ident" and t.up() in stop):
                return
            if self.looks_like_case_label():
                return
            self.statement()

    def looks_like_case_label(self) -> bool:
        j = self.i
        seen_atom = False
        while j < len(self.toks):
            t = self.toks[j]
            if t.kind == "ident":
                up = t.up()
                if up in _LABEL_BREAKERS or up.startswith("END_"):
                    break
                seen_atom = True
                j += 1
            elif t.kind in ("number", "string"):
                seen_atom = True
                j += 1
            elif t.kind == "op" and t.text in (",", "..", "-", "+"):
                j += 1
            else:
                break
        if not seen_atom or j >= len(self.toks):
            return False
        t = self.toks[j]
        return t.kind == "op" and t.text == ":"

    def for_statement(self):
        kw = self.expect_kw("FOR")
        self.op(kw, "for")
        self.decision("for", kw)
        var = self.cur()
        if var.kind != "ident":
            raise self.fail("expected loop variable")
        self.operand(self.take())
        self.res.writes.add(var.text.casefold())
        assign = self.expect_op(":=")
        self.op(assign)
        self.expression()
        self.expect_kw("TO")
        self.expression()
        if self.cur().up() == "BY":
            self.take()
            self.expression()
        self.expect_kw("DO")
        self.stmt_list(frozenset({"END_FOR"}))
        self.expect_kw("END_FOR")

    def while_statement(self):
        kw = self.expect_kw("WHILE")
        self.op(kw, "while")
        self.decision("while", kw)
        self.expression()
        self.expect_kw("DO")
        self.stmt_list(frozenset({"END_WHILE"}))
        self.expect_kw("END_WHILE")

    def repeat_statement(self):
        kw = self.expect_kw("REPEAT")
        self.op(kw, "repeat")
        self.decision("repeat", kw)
        self.stmt_list(frozenset({"UNTIL"}))
        self.expect_kw("UNTIL")
        self.expression()
        self.expect_kw("END_REPEAT")

    # --- expressions ---

    def binary_info(self, t: RawTok) -> tuple[str, int] | None:
        """Return (identity, precedence) when t is a binary operator."""
        if t.kind == "ident":
            word = t.up()
            if word == "OR":
                return "or", 1
            if word == "XOR":
                return "xor", 2
            if word == "AND":
                return "and", 3
            if word == "MOD":
                return "mod", 6
            return None
        if t.kind != "op":
            return None
        if t.text == "&":
            return "and", 3
        if t.text in _COMPARE_OPS and t.text != "=>":
            return t.text, 4 if t.text in ("=", "<>") else 5
        if t.text in _ADD_OPS:
            return t.text, 6
        if t.text in _MUL_OPS:
            return t.text, 7
        if t.text == "**":
            return "**", 8
        return None

    def expression(self, min_prec: int = 0):
        self.unary()
        self.continue_binary(min_prec)

    def continue_binary(self, min_prec: int):
        while True:
            info = self.binary_info(self.cur())
            if info is None or info[1] < min_prec:
                return
            identity, prec = info
            self.op(self.take(), identity)
            self.unary_then_binary(prec + 1)

    def unary_then_binary(self, min_prec: int):
        self.unary()
        self.continue_binary(min_prec)

    def unary(self):
        t = self.cur()
        if t.kind == "ident" and t.up() == "NOT":
            self.op(self.take(), "not")
            self.unary()
            return
        if t.kind == "op" and t.text in ("-", "+"):
            self.op(self.take())
            self.unary()
            return
        self.primary()

    def primary(self):
        t = self.cur()
        if t.kind == "op" and t.text == "(":
            self.op(self.take(), "()")
            self.expression()
            self.expect_op(")")
            return
        if t.kind in ("number", "string"):
            self.operand(self.take())
            return
        if t.kind == "address":
            self.operand(self.take())
            self.res.reads.add(t.text.casefold())
            return
        if t.kind == "ident":
            word = t.up()
            if word in ("TRUE", "FALSE"):
                self.operand(self.take())
                return
            ref = self.reference(register="read")
            if ref.is_call and ref.call is not None:
                ref.call.returns += 1  # expression context consumes the value
            return
        raise self.fail("unexpected %r in expression" % (t.text or "end of body"))

    # --- references and calls ---

    @dataclass
    class _Ref:
        root_key: str
        is_call: bool
        member: str | None = None  # first member when path is root.member
        call: "_RawCall | None" = None

    def reference(self, register: str | None) -> "_BodyParser._Ref":
        """Parse a variable reference or invocation starting at an
        identifier/address.  register: "read" registers the root as a
        read; None defers registration to the caller (assignment LHS)."""
        t = self.cur()
        if t.kind == "address":
            self.operand(self.take())
            key = t.text.casefold()
            if register == "read":
                self.res.reads.add(key)
            return self._Ref(key, False)

        path = self.call_lookahead()
        if path is not None:
            return self.invocation(path)

        root = self.take()
        self.operand(root)
        root_key = root.text.casefold()
        first_member: str | None = None
        saw_subscript = False
        while True:
            nxt = self.cur()
            if nxt.kind == "op" and nxt.text == ".":
                self.op(self.take())
                member = self.cur()
                if member.kind != "ident":
                    raise self.fail("expected member name after '.'")
                self.operand(self.take())
                if first_member is None and not saw_subscript:
                    first_member = member.text.casefold()
            elif nxt.kind == "op" and nxt.text == "[":
                self.op(self.take(), "[]")
                saw_subscript = True
                self.expression()
                while self.cur().kind == "op" and self.cur().text == ",":
                    self.op(self.take())
                    self.expression()
                self.expect_op("]")
            else:
                break
        ref = self._Ref(root_key, False, first_member)
        if register == "read":
            self.register_ref_read(ref)
        return ref

    def register_ref_read(self, ref: "_BodyParser._Ref"):
        self.res.reads.add(ref.root_key)
        if ref.member is not None:
            outputs = self.fb_instances.get(ref.root_key)
            if outputs is not None and ref.member in outputs:
                self.res.member_reads.setdefault(ref.root_key, set()).add(ref.member)

    def call_lookahead(self) -> list[RawTok] | None:
        """Detect `ident ('.' ident)* '('` without consuming anything."""
        j = self.i
        path = []
        while True:
            if j >= len(self.toks) or self.toks[j].kind != "ident":
                return None
            if self.toks[j].up() in _STMT_START or self.toks[j].up() in ("AND", "OR", "XOR", "NOT", "MOD", "TRUE", "FALSE"):
                return None
            path.append(self.toks[j])
            j += 1
            if j < len(self.toks) and self.toks[j].kind == "op" and self.toks[j].text == ".":
                j += 1
                continue
            break
        if j < len(self.toks) and self.toks[j].kind == "op" and self.toks[j].text == "(":
            return path
        return None

    def invocation(self, path: list[RawTok]) -> "_BodyParser._Ref":
        lexeme = ".".join(p.text for p in path)
        self.i += len(path) * 2 - 1  # idents and the dots between them
        self.res.tokens.append(Token.operator(lexeme, lexeme.casefold() + "()"))
        self.expect_op("(")  # argument parens belong to the invocation
        call = _RawCall(lexeme, path[0].text.casefold(), 0, 0)
        self.res.calls.append(call)
        if not (self.cur().kind == "op" and self.cur().text == ")"):
            self.argument(call)
            while self.cur().kind == "op" and self.cur().text == ",":
                self.op(self.take())
                self.argument(call)
        self.expect_op(")")
        return self._Ref(call.key, True, call=call)

    def argument(self, call: _RawCall):
        t = self.cur()
        nxt = self.peek()
        if t.kind == "ident" and nxt.kind == "op" and nxt.text in (":=", "=>"):
            self.operand(self.take())  # formal parameter name
            binder = self.take()
            self.op(binder)
            if binder.text == ":=":
                call.args += 1
                self.expression()
            else:
                call.returns += 1
                target = self.reference(register=None)
                if not target.is_call:
                    self.res.writes.add(target.root_key)
            return
        call.args += 1
        self.expression()


# ---------------------- fragment entry points ----------------------


def _run_body(
    raw: list[RawTok],
    path: str,
    fb_instances: dict[str, frozenset[str]] | None = None,
    value_context: bool = False,
) -> _BodyResult:
    parser = _BodyParser(raw, path, fb_instances)
    parser.parse_body()
    if value_context and parser.last_bare_call is not None:
        # The fragment is an expression whose result a surrounding
        # construct (e.g. a transition condition) consumes.
        parser.last_bare_call.returns += 1
    return parser.res


def _finalize_calls(res: _BodyResult) -> tuple[CallSite, ...]:
    """Attach distinct FB output reads to the instance's first call."""
    pending = {inst: len(members) for inst, members in res.member_reads.items()}
    sites: list[CallSite] = []
    for call in res.calls:
        extra = pending.pop(call.key, 0)
        sites.append(CallSite(call.callee, call.args, call.returns + extra))
    return tuple(sites)


def tokenize_st(text: str, path: str = "") -> tuple[Token, ...]:
    """Classify every lexical element of an ST statement list or expression."""
    res = _run_body(lex(text, path), path)
    return tuple(res.tokens)


def count_decisions_st(text: str, path: str = "") -> tuple[int, tuple[DecisionSpan, ...]]:
    res = _run_body(lex(text, path), path)
    spans = tuple(res.decisions)
    return len(spans), spans


def extract_calls_st(
    text: str,
    path: str = "",
    fb_instances: dict[str, frozenset[str]] | None = None,
    value_consumed: bool = False,
) -> tuple[CallSite, ...]:
    """Call sites of a fragment.  value_consumed marks a bare expression
    fragment whose result feeds a surrounding context."""
    res = _run_body(lex(text, path), path, fb_instances, value_context=value_consumed)
    return _finalize_calls(res)


def st_fragment_facts(
    text: str,
    path: str = "",
    fb_instances: dict[str, frozenset[str]] | None = None,
    value_context: bool = False,
) -> _BodyResult:
    """Full extraction result for an embedded ST fragment (used by the
    XML frontend for bodies, transition conditions and inline actions)."""
    return _run_body(lex(text, path), path, fb_instances, value_context=value_context)


# ---------------------- declarations ----------------------

_POU_KINDS = {
    "PROGRAM": (PouKind.PROGRAM, "END_PROGRAM"),
    "FUNCTION_BLOCK": (PouKind.FUNCTION_BLOCK, "END_FUNCTION_BLOCK"),
    "FUNCTION": (PouKind.FUNCTION, "END_FUNCTION"),
    "ORGANIZATION_BLOCK": (PouKind.ORGANIZATION_BLOCK, "END_ORGANIZATION_BLOCK"),
}

_VAR_SECTIONS = {
    "VAR_INPUT": VarSection.INPUT,
    "VAR_OUTPUT": VarSection.OUTPUT,
    "VAR_IN_OUT": VarSection.IN_OUT,
    "VAR": VarSection.LOCAL,
    "VAR_TEMP": VarSection.TEMP,
    "VAR_EXTERNAL": VarSection.EXTERNAL,
    "VAR_GLOBAL": VarSection.GLOBAL,
}

_VAR_QUALIFIERS = frozenset({"RETAIN", "NON_RETAIN", "CONSTANT", "PERSISTENT"})


@dataclass(frozen=True)
class StSource:
    """One ST input: a path label plus the full text."""

    path: str
    text: str


@dataclass(frozen=True)
class StUnit:
    """Top-level construct found in an ST file."""

    kind: str  # "pou" | "types" | "globals"
    tokens: tuple[RawTok, ...]


def split_st_units(source: StSource) -> list[StUnit]:
    """Slice a file into POUs, TYPE blocks and VAR_GLOBAL lists."""
    toks = lex(source.text, source.path)
    units: list[StUnit] = []
    i = 0
    while i < len(toks):
        t = toks[i]
        word = t.up()
        if word in _POU_KINDS:
            end_kw = _POU_KINDS[word][1]
            j = _find_kw(toks, i + 1, end_kw, source.path, t)
            units.append(StUnit("pou", tuple(toks[i : j + 1])))
            i = j + 1
        elif word == "TYPE":
            j = _find_kw(toks, i + 1, "END_TYPE", source.path, t)
            units.append(StUnit("types", tuple(toks[i : j + 1])))
            i = j + 1
        elif word == "VAR_GLOBAL":
            j = _find_kw(toks, i + 1, "END_VAR", source.path, t)
            units.append(StUnit("globals", tuple(toks[i : j + 1])))
            i = j + 1
        elif t.kind == "op" and t.text == ";":
            i += 1
        else:
            raise ParseError("unexpected top-level token %r" % t.text, source.path, t.line, t.col)
    return units


def _find_kw(toks, start, word, path, open_tok) -> int:
    for j in range(start, len(toks)):
        if toks[j].up() == word:
            return j
    raise ParseError("missing %s" % word, path, open_tok.line, open_tok.col)


class _DeclCursor:
    def __init__(self, toks: tuple[RawTok, ...], path: str):
        self.toks = toks
        self.path = path
        self.i = 0

    def cur(self) -> RawTok:
        return self.toks[self.i] if self.i < len(self.toks) else _EOF

    def take(self) -> RawTok:
        t = self.cur()
        self.i += 1
        return t

    def fail(self, msg: str) -> ParseError:
        t = self.cur()
        return ParseError(msg, self.path, t.line, t.col)

    def expect_ident(self) -> RawTok:
        t = self.cur()
        if t.kind != "ident":
            raise self.fail("expected identifier, found %r" % t.text)
        return self.take()

    def expect_op(self, op: str) -> RawTok:
        t = self.cur()
        if not (t.kind == "op" and t.text == op):
            raise self.fail("expected %r, found %r" % (op, t.text))
        return self.take()

    def at_op(self, op: str) -> bool:
        t = self.cur()
        return t.kind == "op" and t.text == op

    def at_kw(self, word: str) -> bool:
        return self.cur().up() == word

    def skip_initializer(self):
        """Consume `:= <value>` up to the terminating ';' at depth 0."""
        depth = 0
        while True:
            t = self.cur()
            if t.kind == "eof":
                raise self.fail("unterminated initializer")
            if t.kind == "op":
                if t.text in ("(", "["):
                    depth += 1
                elif t.text in (")", "]"):
                    depth -= 1
                elif t.text == ";" and depth == 0:
                    return
            self.take()


def parse_type_spec(cur: _DeclCursor) -> TypeSpec:
    t = cur.cur()
    word = t.up()
    if word == "ARRAY":
        cur.take()
        cur.expect_op("[")
        dims = [_parse_range(cur)]
        while cur.at_op(","):
            cur.take()
            dims.append(_parse_range(cur))
        cur.expect_op("]")
        if cur.cur().up() != "OF":
            raise cur.fail("expected OF")
        cur.take()
        element = parse_type_spec(cur)
        return TypeSpec("array", dims=tuple(dims), element=element)
    if word == "STRUCT":
        cur.take()
        fields: list[tuple[str, str]] = []
        while not cur.at_kw("END_STRUCT"):
            if cur.cur().kind == "eof":
                raise cur.fail("unterminated STRUCT")
            names = [cur.expect_ident().text]
            while cur.at_op(","):
                cur.take()
                names.append(cur.expect_ident().text)
            cur.expect_op(":")
            member_spec = parse_type_spec(cur)
            if cur.at_op(":="):
                cur.take()
                cur.skip_initializer()
            cur.expect_op(";")
            fields.extend((n, member_spec.render()) for n in names)
        cur.take()
        return TypeSpec("struct", fields=tuple(fields))
    if word in ("STRING", "WSTRING"):
        cur.take()
        if cur.at_op("(") or cur.at_op("["):
            closer = ")" if cur.take().text == "(" else "]"
            while not cur.at_op(closer):
                if cur.cur().kind == "eof":
                    raise cur.fail("unterminated string length")
                cur.take()
            cur.take()
        return TypeSpec("string", name=word)
    if t.kind == "op" and t.text == "(":
        cur.take()
        values = []
        while not cur.at_op(")"):
            if cur.cur().kind == "eof":
                raise cur.fail("unterminated enumeration")
            v = cur.take()
            if v.kind == "ident":
                values.append(v.text)
            elif v.kind == "op" and v.text in (",", ":="):
                continue
            # initial values and separators are skipped
        cur.take()
        return TypeSpec("enum", fields=tuple((v, "") for v in values))
    if t.kind != "ident":
        raise cur.fail("expected a type, found %r" % t.text)
    name_tok = cur.take()
    if cur.at_op("("):
        # Subrange such as INT (0..100).
        cur.take()
        while not cur.at_op(")"):
            if cur.cur().kind == "eof":
                raise cur.fail("unterminated subrange")
            cur.take()
        cur.take()
        return TypeSpec("subrange", name=name_tok.text, element=named(name_tok.text))
    return named(name_tok.text)


def _parse_range(cur: _DeclCursor) -> tuple[int, int]:
    lo = _parse_bound(cur)
    cur.expect_op("..")
    hi = _parse_bound(cur)
    return lo, hi


def _parse_bound(cur: _DeclCursor) -> int:
    sign = 1
    if cur.at_op("-"):
        cur.take()
        sign = -1
    elif cur.at_op("+"):
        cur.take()
    t = cur.take()
    if t.kind != "number":
        raise ParseError("array bounds must be integer literals", cur.path, t.line, t.col)
    try:
        return sign * int(t.text.replace("_", ""))
    except ValueError:
        raise ParseError("array bound %r is not an integer" % t.text, cur.path, t.line, t.col) from None


def parse_type_block(unit: StUnit, context: TypeContext, path: str) -> None:
    """Feed one TYPE .. END_TYPE block into the shared type table."""
    cur = _DeclCursor(unit.tokens, path)
    cur.take()  # TYPE
    while not cur.at_kw("END_TYPE"):
        if cur.cur().kind == "eof":
            raise cur.fail("unterminated TYPE block")
        name = cur.expect_ident()
        cur.expect_op(":")
        spec = parse_type_spec(cur)
        if cur.at_op(":="):
            cur.take()
            cur.skip_initializer()
        cur.expect_op(";")
        context.define(name.text, spec)
    cur.take()


def parse_global_names(unit: StUnit, path: str) -> list[str]:
    """Names declared in a standalone VAR_GLOBAL .. END_VAR list."""
    cur = _DeclCursor(unit.tokens, path)
    cur.take()  # VAR_GLOBAL
    while cur.cur().up() in _VAR_QUALIFIERS:
        cur.take()
    names: list[str] = []
    while not cur.at_kw("END_VAR"):
        if cur.cur().kind == "eof":
            raise cur.fail("unterminated VAR_GLOBAL block")
        batch = [cur.expect_ident().text]
        while cur.at_op(","):
            cur.take()
            batch.append(cur.expect_ident().text)
        if cur.cur().up() == "AT":
            cur.take()
            cur.take()  # the address
        cur.expect_op(":")
        parse_type_spec(cur)
        if cur.at_op(":="):
            cur.take()
            cur.skip_initializer()
        cur.expect_op(";")
        names.extend(batch)
    return names


@dataclass
class _RawDecl:
    name: str
    section: VarSection
    spec: TypeSpec


def _parse_var_sections(cur: _DeclCursor) -> list[_RawDecl]:
    decls: list[_RawDecl] = []
    while True:
        word = cur.cur().up()
        if word not in _VAR_SECTIONS:
            return decls
        section = _VAR_SECTIONS[word]
        cur.take()
        while cur.cur().up() in _VAR_QUALIFIERS:
            cur.take()
        while not cur.at_kw("END_VAR"):
            if cur.cur().kind == "eof":
                raise cur.fail("unterminated VAR section")
            names = [cur.expect_ident().text]
            while cur.at_op(","):
                cur.take()
                names.append(cur.expect_ident().text)
            if cur.cur().up() == "AT":
                cur.take()
                addr = cur.take()
                if addr.kind != "address":
                    raise ParseError("expected a direct address after AT", cur.path, addr.line, addr.col)
            cur.expect_op(":")
            spec = parse_type_spec(cur)
            if cur.at_op(":="):
                cur.take()
                cur.skip_initializer()
            cur.expect_op(";")
            decls.extend(_RawDecl(n, section, spec) for n in names)
        cur.take()


def build_variable(
    raw: _RawDecl, context: TypeContext, pou_name: str
) -> tuple[VariableDecl, list[AnalysisWarning]]:
    type_class, subs, warnings = context.classify(raw.spec, raw.name)
    warnings = [AnalysisWarning(w.code, w.message, w.path, pou_name) for w in warnings]
    return (
        VariableDecl(raw.name, raw.section, type_class, raw.spec.render(), subs),
        warnings,
    )


def interface_of_unit(unit: StUnit, path: str) -> tuple[str, PouKind, list[_RawDecl], TypeSpec | None]:
    """First pass over a POU unit: name, kind, raw declarations, return type."""
    cur = _DeclCursor(unit.tokens, path)
    head = cur.take()
    kind = _POU_KINDS[head.up()][0]
    name_tok = cur.cur()
    if name_tok.kind == "string":
        name = name_tok.text[1:-1]
        cur.take()
    else:
        name = cur.expect_ident().text
    return_spec: TypeSpec | None = None
    if kind is PouKind.FUNCTION and cur.at_op(":"):
        cur.take()
        return_spec = parse_type_spec(cur)
    decls = _parse_var_sections(cur)
    return name, kind, decls, return_spec


def fb_instance_map(variables, context: TypeContext) -> dict[str, frozenset[str]]:
    """Map casefolded FB-instance names to their output member names."""
    return {
        v.name.casefold(): context.fb_output_names(v.type_name)
        for v in variables
        if context.is_fb(v.type_name)
    }


def external_candidates(variables, global_names: frozenset[str]) -> set[str]:
    names = set(global_names)
    names.update(
        v.name.casefold()
        for v in variables
        if v.section in (VarSection.EXTERNAL, VarSection.GLOBAL)
    )
    return names


def finalize_body(res: _BodyResult, variables, global_names: frozenset[str]) -> BodyFacts:
    """Turn a raw walk result into BodyFacts for a POU with the given
    declarations: attach FB output reads to call sites and keep only
    genuinely external accesses."""
    candidates = external_candidates(variables, global_names)
    return BodyFacts.build(
        tokens=res.tokens,
        decisions=res.decisions,
        calls=_finalize_calls(res),
        external_reads=external_filter(res.reads, candidates, "im"),
        external_writes=external_filter(res.writes, candidates, "qm"),
    )


def parse_pou_unit(
    unit: StUnit,
    path: str,
    context: TypeContext,
    global_names: frozenset[str],
) -> tuple[Pou, list[AnalysisWarning]]:
    """Parse one already-sliced POU unit into the IR."""
    cur = _DeclCursor(unit.tokens, path)
    head = cur.take()
    kind, end_kw = _POU_KINDS[head.up()]
    name_tok = cur.cur()
    if name_tok.kind == "string":
        name = name_tok.text[1:-1]
        cur.take()
    else:
        name = cur.expect_ident().text

    warnings: list[AnalysisWarning] = []
    variables: list[VariableDecl] = []
    if kind is PouKind.FUNCTION and cur.at_op(":"):
        cur.take()
        return_spec = parse_type_spec(cur)
        var, ws = build_variable(_RawDecl(name, VarSection.OUTPUT, return_spec), context, name)
        variables.append(var)
        warnings.extend(ws)

    for raw in _parse_var_sections(cur):
        var, ws = build_variable(raw, context, name)
        variables.append(var)
        warnings.extend(ws)

    # Everything between the declarations and the closing keyword is body.
    body_toks = list(unit.tokens[cur.i : -1])
    if unit.tokens[-1].up() != end_kw:
        raise ParseError("missing %s" % end_kw, path, head.line, head.col)

    res = _run_body(body_toks, path, fb_instance_map(variables, context))
    body = finalize_body(res, variables, global_names)
    pou = Pou(
        name=name,
        kind=kind,
        language=Language.ST,
        variables=tuple(variables),
        body=body,
        source_ref=SourceRef(path, head.line, head.col),
    )
    return pou, warnings


def parse_st_pou(
    source: StSource,
    context: TypeContext | None = None,
    global_names: frozenset[str] | None = None,
) -> tuple[Pou, list[AnalysisWarning]]:
    """Parse a source holding exactly one POU into the IR.

    `context` supplies user types and FB interfaces gathered from the
    whole input set; `global_names` lists casefolded global variables so
    body accesses to them count as external reads/writes.
    """
    context = context or TypeContext()
    global_names = global_names or frozenset()
    units = [u for u in split_st_units(source) if u.kind == "pou"]
    if len(units) != 1:
        raise ParseError("expected exactly one POU, found %d" % len(units), source.path)
    return parse_pou_unit(units[0], source.path, context, global_names)


def external_filter(names: set[str], candidates: set[str], address_letters: str) -> frozenset[str]:
    """Keep declared externals/globals plus direct addresses of the
    allowed location letters (reads: I and M, writes: Q and M)."""
    out = set()
    for n in names:
        if n.startswith("%"):
            if len(n) > 1 and n[1] in address_letters:
                out.add(n)
        elif n in candidates:
            out.add(n)
    return frozenset(out)

"""
Tokenizer, parser and printer for the term language.

A program is a sequence of ';'-terminated statements. A statement that starts
with ``name =`` defines one or more mutually recursive names, any other
statement is a term to be evaluated.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum

from const import RESERVED_WORDS
from errors import LexError, ParseError, Position

_LOG = logging.getLogger(__name__)


class TokenKind(str, Enum):
    """Kinds of tokens; the value is how the kind is named in error messages."""

    IDENT = "identifier"
    CONST = "constant"
    LPAREN = "'('"
    RPAREN = "')'"
    LBRACKET = "'['"
    RBRACKET = "']'"
    LBRACE = "'{'"
    RBRACE = "'}'"
    BAR = "'|'"
    DOT = "'.'"
    COMMA = "','"
    SEMI = "';'"
    EQUALS = "'='"
    ARROW = "'=>'"
    CASE = "'case'"
    OF = "'of'"
    LET = "'let'"
    IN = "'in'"
    EOF = "end of input"


_PUNCTUATION = {
    "=>": TokenKind.ARROW,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "|": TokenKind.BAR,
    ".": TokenKind.DOT,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMI,
    "=": TokenKind.EQUALS,
}

_KEYWORDS = {
    "case": TokenKind.CASE,
    "of": TokenKind.OF,
    "let": TokenKind.LET,
    "in": TokenKind.IN,
}

_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r\n\f\v]+)
  | (?P<comment>\(\*)
  | (?P<name>[A-Za-z][A-Za-z0-9'_]*)
  | (?P<punct>=>|[()\[\]{}|.,;=])
    """,
    re.VERBOSE,
)
_COMMENT_RE = re.compile(r"\(\*|\*\)")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: Position

    def describe(self) -> str:
        """Human readable form for error messages."""
        if self.kind in (TokenKind.IDENT, TokenKind.CONST):
            return f"{self.kind.value} '{self.text}'"
        return self.kind.value


class _Lines:
    """Maps string offsets to 1-based line/column positions."""

    def __init__(self, source: str) -> None:
        self._starts = [0] + [m.end() for m in re.finditer("\n", source)]

    def position(self, offset: int) -> Position:
        low, high = 0, len(self._starts) - 1
        while low < high:
            mid = (low + high + 1) // 2
            if self._starts[mid] <= offset:
                low = mid
            else:
                high = mid - 1
        return Position(low + 1, offset - self._starts[low] + 1)


def _skip_comment(source: str, start: int, lines: _Lines) -> int:
    """Return the offset just after the comment opened at ``start``; comments nest."""
    depth = 0
    offset = start
    while True:
        match = _COMMENT_RE.search(source, offset)
        if match is None:
            raise LexError(lines.position(start), "unterminated comment")
        depth += 1 if match.group() == "(*" else -1
        offset = match.end()
        if depth == 0:
            return offset


def tokenize(source: str) -> list[Token]:
    """
    Split program text into tokens.

    :param source: the program text
    :return: the tokens, always ending with an EOF token
    """
    lines = _Lines(source)
    tokens: list[Token] = []
    offset = 0
    while offset < len(source):
        match = _TOKEN_RE.match(source, offset)
        if match is None:
            raise LexError(lines.position(offset), f"illegal character {source[offset]!r}")
        position = lines.position(offset)
        kind = match.lastgroup
        text = match.group()
        if kind == "comment":
            offset = _skip_comment(source, offset, lines)
            continue
        if kind == "name":
            if text in RESERVED_WORDS:
                tokens.append(Token(_KEYWORDS[text], text, position))
            elif text[0].islower():
                tokens.append(Token(TokenKind.IDENT, text, position))
            else:
                tokens.append(Token(TokenKind.CONST, text, position))
        elif kind == "punct":
            tokens.append(Token(_PUNCTUATION[text], text, position))
        offset = match.end()
    # end of input is reported at the last character so errors stay inside the text
    tokens.append(Token(TokenKind.EOF, "", lines.position(max(len(source) - 1, 0))))
    _LOG.debug("Tokenized %d characters into %d tokens", len(source), len(tokens))
    return tokens


# --- abstract syntax -------------------------------------------------------


class Term:
    """Base class of all term nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    param: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Con(Term):
    constant: str
    arg: Term


@dataclass(frozen=True)
class Branch:
    constant: str
    binder: str
    body: Term


@dataclass(frozen=True)
class Case(Term):
    scrutinee: Term
    branches: tuple[Branch, ...]


@dataclass(frozen=True)
class Tuple(Term):
    entries: tuple[tuple[str, Term], ...] = ()

    def get(self, label: str) -> Term | None:
        """Return the component with the given label, if any."""
        for name, value in self.entries:
            if name == label:
                return value
        return None


@dataclass(frozen=True)
class Proj(Term):
    tuple: Term
    label: str


@dataclass(frozen=True)
class Binding:
    """One ``name = term`` of a let or a definition."""

    name: str
    term: Term
    position: Position | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Let(Term):
    bindings: tuple[Binding, ...]
    body: Term


@dataclass(frozen=True)
class Evaluate:
    """A term to be evaluated."""

    term: Term
    position: Position | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Define:
    """Simultaneous definitions for further use."""

    bindings: tuple[Binding, ...]
    position: Position | None = field(default=None, compare=False)

    @property
    def names(self) -> list[str]:
        """Defined names in source order."""
        return [b.name for b in self.bindings]


Statement = Evaluate | Define


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...] = ()

    @property
    def definitions(self) -> list[Define]:
        """All definition statements in source order."""
        return [s for s in self.statements if isinstance(s, Define)]


def lambda_params(term: Term) -> tuple[list[str], Term]:
    """Split the leading lambdas off a term: ``[x][y]t`` gives ``(['x', 'y'], t)``."""
    params = []
    while isinstance(term, Lam):
        params.append(term.param)
        term = term.body
    return params, term


# --- parser ----------------------------------------------------------------

_ATOM_START = (TokenKind.IDENT, TokenKind.CONST, TokenKind.LPAREN)
_LABEL = (TokenKind.IDENT, TokenKind.CONST)


class _Parser:
    """Recursive descent over a token list."""

    def __init__(self, tokens: list[Token]) -> None:
        if not tokens or tokens[-1].kind is not TokenKind.EOF:
            raise ValueError("token list must end with EOF")
        self._tokens = tokens
        self._index = 0

    @property
    def _next(self) -> Token:
        return self._tokens[self._index]

    def _peek(self, ahead: int = 1) -> Token:
        return self._tokens[min(self._index + ahead, len(self._tokens) - 1)]

    def _advance(self) -> Token:
        token = self._next
        if token.kind is not TokenKind.EOF:
            self._index += 1
        return token

    def _error(self, *expected: TokenKind | str) -> ParseError:
        names = {e.value if isinstance(e, TokenKind) else e for e in expected}
        return ParseError(self._next.position, names, self._next.describe())

    def _expect(self, *kinds: TokenKind) -> Token:
        if self._next.kind not in kinds:
            raise self._error(*kinds)
        return self._advance()

    def program(self) -> Program:
        statements = []
        while self._next.kind is not TokenKind.EOF:
            statements.append(self.statement())
        return Program(tuple(statements))

    def statement(self) -> Statement:
        start = self._next.position
        if self._next.kind is TokenKind.IDENT and self._peek().kind is TokenKind.EQUALS:
            statement = Define(self.bindings(), start)
        else:
            statement = Evaluate(self.term(), start)
        self._expect(TokenKind.SEMI)
        return statement

    def bindings(self) -> tuple[Binding, ...]:
        bindings: list[Binding] = []
        seen: set[str] = set()
        while True:
            name = self._expect(TokenKind.IDENT)
            if name.text in seen:
                raise ParseError(name.position, {"a distinct name"}, f"duplicate binding '{name.text}'")
            seen.add(name.text)
            self._expect(TokenKind.EQUALS)
            bindings.append(Binding(name.text, self.term(), name.position))
            if self._next.kind is not TokenKind.COMMA:
                return tuple(bindings)
            self._advance()

    def term(self) -> Term:
        match self._next.kind:
            case TokenKind.LBRACKET:
                self._advance()
                param = self._expect(TokenKind.IDENT).text
                self._expect(TokenKind.RBRACKET)
                return Lam(param, self.term())
            case TokenKind.CASE:
                self._advance()
                scrutinee = self.term()
                self._expect(TokenKind.OF)
                self._expect(TokenKind.LBRACE)
                branches = self.branches()
                self._expect(TokenKind.RBRACE)
                return Case(scrutinee, branches)
            case TokenKind.LET:
                self._advance()
                bindings = self.bindings()
                self._expect(TokenKind.IN)
                return Let(bindings, self.term())
            case kind if kind in _ATOM_START:
                return self.application()
        raise self._error(TokenKind.LBRACKET, TokenKind.CASE, TokenKind.LET, *_ATOM_START)

    def branches(self) -> tuple[Branch, ...]:
        branches: list[Branch] = []
        seen: set[str] = set()
        while True:
            constant = self._expect(TokenKind.CONST)
            if constant.text in seen:
                raise ParseError(constant.position, {"a distinct constant"}, f"duplicate branch '{constant.text}'")
            seen.add(constant.text)
            binder = self._expect(TokenKind.IDENT).text
            self._expect(TokenKind.ARROW)
            branches.append(Branch(constant.text, binder, self.term()))
            if self._next.kind is not TokenKind.BAR:
                return tuple(branches)
            self._advance()

    def application(self) -> Term:
        term = self.postfix()
        while self._next.kind in _ATOM_START:
            term = App(term, self.postfix())
        return term

    def postfix(self) -> Term:
        term = self.primary()
        while self._next.kind is TokenKind.DOT:
            self._advance()
            term = Proj(term, self._expect(*_LABEL).text)
        return term

    def primary(self) -> Term:
        token = self._next
        if token.kind is TokenKind.IDENT:
            self._advance()
            return Var(token.text)
        if token.kind is TokenKind.CONST:
            self._advance()
            if self._next.kind not in _ATOM_START:
                raise self._error(*_ATOM_START)
            return Con(token.text, self.postfix())
        if token.kind is not TokenKind.LPAREN:
            raise self._error(*_ATOM_START)
        self._advance()
        if self._next.kind is TokenKind.RPAREN:
            self._advance()
            return Tuple()
        if self._next.kind in _LABEL and self._peek().kind is TokenKind.EQUALS:
            entries = self.tuple_entries()
            self._expect(TokenKind.RPAREN)
            return Tuple(entries)
        inner = self.term()
        self._expect(TokenKind.RPAREN)
        return inner

    def tuple_entries(self) -> tuple[tuple[str, Term], ...]:
        entries: list[tuple[str, Term]] = []
        seen: set[str] = set()
        while True:
            label = self._expect(*_LABEL)
            if label.text in seen:
                raise ParseError(label.position, {"a distinct label"}, f"duplicate label '{label.text}'")
            seen.add(label.text)
            self._expect(TokenKind.EQUALS)
            entries.append((label.text, self.term()))
            if self._next.kind is not TokenKind.COMMA:
                return tuple(entries)
            self._advance()


def parse_program(tokens: list[Token]) -> Program:
    """
    Parse a token list into a program.

    :param tokens: output of :func:`tokenize`
    :return: the statements in source order
    """
    program = _Parser(tokens).program()
    _LOG.debug("Parsed %d statement(s)", len(program.statements))
    return program


def parse(source: str) -> Program:
    """Tokenize and parse program text."""
    return parse_program(tokenize(source))


def parse_term(source: str) -> Term:
    """Parse a single term, with or without a trailing ';'."""
    parser = _Parser(tokenize(source))
    term = parser.term()
    if parser._next.kind is TokenKind.SEMI:
        parser._advance()
    parser._expect(TokenKind.EOF)
    return term


# --- printer ---------------------------------------------------------------


def pretty(term: Term) -> str:
    """Print a term with every compound node parenthesized; re-parsing gives the same term."""
    match term:
        case Var(name):
            return name
        case Lam(param, body):
            return f"([{param}]{pretty(body)})"
        case App(fun, arg):
            return f"({pretty(fun)} {pretty(arg)})"
        case Con(constant, Tuple(entries)):
            return f"({constant}({_entries(entries)}))"
        case Con(constant, arg):
            return f"({constant}({pretty(arg)}))"
        case Case(scrutinee, branches):
            alternatives = " | ".join(f"{b.constant} {b.binder} => {pretty(b.body)}" for b in branches)
            return f"(case {pretty(scrutinee)} of {{ {alternatives} }})"
        case Tuple(entries):
            return f"({_entries(entries)})"
        case Proj(inner, label):
            return f"{pretty(inner)}.{label}"
        case Let(bindings, body):
            return f"(let {_bindings(bindings)} in {pretty(body)})"
    raise TypeError(f"not a term: {term!r}")


def _entries(entries: tuple[tuple[str, Term], ...]) -> str:
    return ", ".join(f"{label}={pretty(value)}" for label, value in entries)


def _bindings(bindings: tuple[Binding, ...]) -> str:
    return ", ".join(f"{b.name} = {pretty(b.term)}" for b in bindings)


def pretty_program(program: Program) -> str:
    """Print a whole program, one statement per line."""
    lines = []
    for statement in program.statements:
        if isinstance(statement, Define):
            lines.append(f"{_bindings(statement.bindings)};")
        else:
            lines.append(f"{pretty(statement.term)};")
    return "\n".join(lines) + ("\n" if lines else "")

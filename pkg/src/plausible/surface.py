"""Textual boundary: parse and print formulas, knowledge bases, queries, sentences.

Knowledge-base files are line oriented (UTF-8, LF, ``#`` comments)::

    nec emu -> bird
    poss bird
    def emu => ~flies @ 1/100
    lik bird ~> sings @ 1/20^2

Queries are single lines: ``consistent?`` or goal disjuncts such as
``def bird => ~emu ?`` joined by ``or``, optionally followed by the flags
``--improper --qualitative --oracle``.  Sentences (used by ``dualize`` and the
theorem checker) combine modal atoms with ``not``/``and``/``or``/``->``; inside
a sentence the formula arguments of modal atoms bind above ``|``, so formula
implications there must be parenthesized, e.g. ``nec (a -> b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundRangeError, ParseError
from .modal import (
    Default,
    Likelihood,
    ModalAtom,
    Necessity,
    Possibility,
    SAnd,
    SImp,
    SNot,
    SOr,
    Sentence,
    is_modal_atom,
)
from .propcore import FALSE, TRUE, Formula, atom

_KEYWORDS = {"nec", "poss", "def", "lik", "or", "and", "not", "consistent"}
_FLAGS = {"--improper", "--qualitative", "--oracle"}


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_TWO_CHAR = {"->": "ARROW", "~>": "LIKARROW", "=>": "DEFARROW"}
_ONE_CHAR = {
    "|": "PIPE",
    "&": "AMP",
    "~": "TILDE",
    "(": "LP",
    ")": "RP",
    "@": "AT",
    "^": "CARET",
    "/": "SLASH",
    "?": "QMARK",
}


def _tokenize(text: str, line: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    i, col = 0, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(_Token("IFF", "<->", line, col))
            i += 3
            col += 3
            continue
        if text.startswith("--", i):
            j = i + 2
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            tokens.append(_Token("FLAG", text[i:j], line, col))
            col += j - i
            i = j
            continue
        two = text[i : i + 2]
        if two in _TWO_CHAR:
            tokens.append(_Token(_TWO_CHAR[two], two, line, col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(_Token(_ONE_CHAR[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            tokens.append(_Token("NUM", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        return self.advance()

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    # -- formulas ----------------------------------------------------------
    # precedence, low to high: <->, -> (right-assoc), |, &, ~

    def formula(self, restricted: bool = False) -> Formula:
        return self._or() if restricted else self._iff()

    def _iff(self) -> Formula:
        left = self._imp()
        if self.at("IFF"):
            self.advance()
            return Formula("iff", args=(left, self._iff()))
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self.at("ARROW"):
            self.advance()
            return Formula("imp", args=(left, self._imp()))
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self.at("PIPE"):
            self.advance()
            left = Formula("or", args=(left, self._and()))
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self.at("AMP"):
            self.advance()
            left = Formula("and", args=(left, self._unary()))
        return left

    def _unary(self) -> Formula:
        if self.at("TILDE"):
            self.advance()
            return Formula("not", args=(self._unary(),))
        if self.at("LP"):
            self.advance()
            inner = self._iff()
            self.expect("RP", "')'")
            return inner
        tok = self.peek()
        if tok.kind == "IDENT":
            if tok.text == "true":
                self.advance()
                return TRUE
            if tok.text == "false":
                self.advance()
                return FALSE
            if tok.text in _KEYWORDS:
                raise self.fail(f"expected formula, found keyword {tok.text!r}")
            self.advance()
            return atom(tok.text)
        raise self.fail(f"expected formula, found {tok.text or 'end of input'!r}")

    # -- rationals ----------------------------------------------------------

    def rational(self) -> Fraction:
        tok = self.expect("NUM", "a rational number")
        try:
            if self.at("SLASH"):
                self.advance()
                den = self.expect("NUM", "a denominator")
                value = Fraction(int(tok.text), int(den.text))
            else:
                value = Fraction(tok.text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational: {exc}", tok.line, tok.column) from None
        return value

    def bound(self) -> Fraction:
        value = self.rational()
        if not 0 <= value <= 1:
            raise BoundRangeError(f"bound {value} outside [0, 1]")
        return value

    def order(self) -> int:
        tok = self.expect("NUM", "an order")
        if "." in tok.text or int(tok.text) < 1:
            raise ParseError("order must be a positive integer", tok.line, tok.column)
        return int(tok.text)

    # -- modal atoms ---------------------------------------------------------

    def modal_atom(self, restricted: bool, require_bound: bool) -> ModalAtom:
        tok = self.expect("IDENT", "a modal keyword")
        if tok.text == "nec":
            return Necessity(self.formula(restricted))
        if tok.text == "poss":
            return Possibility(self.formula(restricted))
        if tok.text == "def":
            antecedent = self.formula(restricted)
            self.expect("DEFARROW", "'=>'")
            consequent = self.formula(restricted)
            eps = None
            if self.at("AT"):
                self.advance()
                eps = self.bound()
            elif require_bound:
                raise self.fail("default statement requires '@ <bound>'")
            return Default(antecedent, consequent, eps)
        if tok.text == "lik":
            antecedent = self.formula(restricted)
            self.expect("LIKARROW", "'~>'")
            consequent = self.formula(restricted)
            floor = None
            order = 1
            if self.at("AT"):
                self.advance()
                floor = self.bound()
                if self.at("CARET"):
                    self.advance()
                    order = self.order()
            elif require_bound:
                raise self.fail("likelihood statement requires '@ <bound>'")
            return Likelihood(antecedent, consequent, floor, order)
        raise ParseError(f"expected nec/poss/def/lik, found {tok.text!r}", tok.line, tok.column)

    # -- sentences ------------------------------------------------------------
    # precedence, low to high: -> (right-assoc), or, and, not

    def sentence(self) -> Sentence:
        left = self._sor()
        if self.at("ARROW"):
            self.advance()
            return SImp(left, self.sentence())
        return left

    def _sor(self) -> Sentence:
        left = self._sand()
        while self.at("IDENT", "or"):
            self.advance()
            left = SOr(left, self._sand())
        return left

    def _sand(self) -> Sentence:
        left = self._sunary()
        while self.at("IDENT", "and"):
            self.advance()
            left = SAnd(left, self._sunary())
        return left

    def _sunary(self) -> Sentence:
        if self.at("IDENT", "not"):
            self.advance()
            return SNot(self._sunary())
        if self.at("LP"):
            self.advance()
            inner = self.sentence()
            self.expect("RP", "')'")
            return inner
        return self.modal_atom(restricted=True, require_bound=False)

    def done(self) -> None:
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)


# ---------------------------------------------------------------------------
# Documents and queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KbStatement:
    atom: ModalAtom
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class KbDocument:
    statements: tuple[KbStatement, ...]

    def atoms(self) -> tuple[ModalAtom, ...]:
        return tuple(st.atom for st in self.statements)


@dataclass(frozen=True)
class Query:
    """A parsed query: a consistency check or a disjunction of modal goals."""

    kind: str  # consistent | default | likelihood | necessity | possibility | mixed
    goals: tuple[ModalAtom, ...] = ()
    proper: bool = True
    qualitative: bool = False
    oracle: bool = False


def parse_formula(text: str) -> Formula:
    parser = _Parser(_tokenize(text))
    f = parser.formula()
    parser.done()
    return f


def parse_kb(text: str) -> KbDocument:
    statements: list[KbStatement] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        parser = _Parser(_tokenize(stripped, line=lineno))
        atom_ = parser.modal_atom(restricted=False, require_bound=True)
        parser.done()
        statements.append(KbStatement(atom_, lineno))
    return KbDocument(tuple(statements))


_GOAL_KIND = {Default: "default", Likelihood: "likelihood", Necessity: "necessity", Possibility: "possibility"}


def parse_query(text: str) -> Query:
    tokens = _tokenize(text)
    flags = [t.text for t in tokens if t.kind == "FLAG"]
    for flag in flags:
        if flag not in _FLAGS:
            raise ParseError(f"unknown flag {flag!r}")
    parser = _Parser([t for t in tokens if t.kind != "FLAG"])
    proper = "--improper" not in flags
    qualitative = "--qualitative" in flags
    oracle = "--oracle" in flags

    if parser.at("IDENT", "consistent"):
        parser.advance()
        parser.expect("QMARK", "'?'")
        parser.done()
        return Query("consistent", (), proper, qualitative, oracle)

    goals: list[ModalAtom] = [parser.modal_atom(restricted=False, require_bound=False)]
    parser.expect("QMARK", "'?'")
    while parser.at("IDENT", "or"):
        parser.advance()
        goals.append(parser.modal_atom(restricted=False, require_bound=False))
        parser.expect("QMARK", "'?'")
    parser.done()
    kinds = {_GOAL_KIND[type(g)] for g in goals}
    kind = kinds.pop() if len(kinds) == 1 else "mixed"
    return Query(kind, tuple(goals), proper, qualitative, oracle)


def parse_sentence(text: str) -> Sentence:
    parser = _Parser(_tokenize(text))
    s = parser.sentence()
    parser.done()
    return s


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_PREC = {"iff": 1, "imp": 2, "or": 3, "and": 4, "not": 5}


def render_formula(f: Formula, ctx: int = 0) -> str:
    if f.kind == "atom":
        return f.name  # type: ignore[return-value]
    if f.kind == "true":
        return "true"
    if f.kind == "false":
        return "false"
    if f.kind == "not":
        return "~" + render_formula(f.args[0], _PREC["not"])
    prec = _PREC[f.kind]
    if f.kind in ("imp", "iff"):  # right-associative
        op = "->" if f.kind == "imp" else "<->"
        text = f"{render_formula(f.args[0], prec + 1)} {op} {render_formula(f.args[1], prec)}"
    else:  # left-associative | and &
        op = "|" if f.kind == "or" else "&"
        text = f"{render_formula(f.args[0], prec)} {op} {render_formula(f.args[1], prec + 1)}"
    return f"({text})" if prec < ctx else text


def _render_bound(value) -> str:
    return str(value)


def render_modal_atom(m: ModalAtom, ctx: int = 0) -> str:
    """Render one modal atom; ``ctx`` is the formula context for its arguments
    (0 inside line-oriented KB files, 4 inside sentences)."""
    if isinstance(m, Necessity):
        return f"nec {render_formula(m.body, ctx)}"
    if isinstance(m, Possibility):
        return f"poss {render_formula(m.body, ctx)}"
    if isinstance(m, Default):
        text = f"def {render_formula(m.antecedent, ctx)} => {render_formula(m.consequent, ctx)}"
        if m.eps is not None:
            text += f" @ {_render_bound(m.eps)}"
        return text
    text = f"lik {render_formula(m.antecedent, ctx)} ~> {render_formula(m.consequent, ctx)}"
    if m.floor is not None:
        text += f" @ {_render_bound(m.floor)}"
        if m.order != 1:
            text += f"^{m.order}"
    return text


def render_kb(doc: KbDocument) -> str:
    return "\n".join(render_modal_atom(st.atom, 0) for st in doc.statements) + "\n"


def render_query(q: Query) -> str:
    if q.kind == "consistent":
        text = "consistent?"
    else:
        text = " or ".join(render_modal_atom(g, 0) + " ?" for g in q.goals)
    if not q.proper:
        text += " --improper"
    if q.qualitative:
        text += " --qualitative"
    if q.oracle:
        text += " --oracle"
    return text


def render_sentence(s: Sentence, parent: str = "top") -> str:
    if is_modal_atom(s):
        text = render_modal_atom(s, ctx=4)  # type: ignore[arg-type]
        return f"({text})" if parent in ("or", "and", "not") else text
    if isinstance(s, SNot):
        return "not " + render_sentence(s.body, "not")
    if isinstance(s, SImp):
        text = f"{render_sentence(s.left, 'imp-left')} -> {render_sentence(s.right, 'imp-right')}"
        return f"({text})" if parent in ("or", "and", "not", "imp-left") else text
    if isinstance(s, SOr):
        text = f"{render_sentence(s.left, 'or')} or {render_sentence(s.right, 'or')}"
        return f"({text})" if parent in ("and", "not") else text
    text = f"{render_sentence(s.left, 'and')} and {render_sentence(s.right, 'and')}"
    return f"({text})" if parent == "not" else text


def render(x) -> str:
    """Render any surface object back to its canonical text."""
    if isinstance(x, Formula):
        return render_formula(x)
    if isinstance(x, KbDocument):
        return render_kb(x)
    if isinstance(x, Query):
        return render_query(x)
    if is_modal_atom(x):
        return render_modal_atom(x)
    return render_sentence(x)

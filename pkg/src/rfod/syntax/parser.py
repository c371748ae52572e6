"""Lexer and recursive-descent parser for the sequent DSL.

Grammar (ASCII):

    sequent   := context "|-" succedent
    context   := /*empty*/ | item ("," item)*
    item      := formula | CTXVAR
    succedent := /*empty*/ | slot (("," | ",_" IDENT) slot)*
    formula   := "forall" VAR "in" DOM "." formula
               | "exists" VAR "in" DOM "." formula
               | "bowtie" VAR "in" DOM "(" formula ";" formula ")"
               | star-chain over or-chain over and-chain of units
    unit      := IDENT "(" term ("," term)* ")" | term "=" term
               | term "!=" term | term "in" DOM | "bot" | "bot_" IDENT
               | "(" formula ")"
    term      := VAR | "<" IDENT "," RATIONAL ">" | "#" IDENT
    DOM       := IDENT | "{" IDENT "}"

Quantifiers bind weakest; & binds tighter than \\/ which binds tighter
than *.  Comments run from "--" to end of line.  A bare identifier in
item position is a context metavariable.  An empty succedent is allowed
(duality can empty the right-hand side).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import DslSyntaxError, LookupFailure
from .ast import (
    And, Atom, Bot, Bowtie, ContextVar, Correlated, DomainTable, Eq, Exists,
    Forall, Formula, Member, Neq, Or, Outcome, Sequent, Sharp, Star, Term, Var,
)

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>--[^\n]*)
  | (?P<newline>\n)
  | (?P<turnstile>\|-)
  | (?P<orop>\\/)
  | (?P<comma_label>,_[A-Za-z_][A-Za-z0-9_'^]*)
  | (?P<rational>\d+(?:/\d+)?|\d*\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'^]*)
  | (?P<neq>!=)
  | (?P<punct>[,.;()<>{}#&*=])
""", re.VERBOSE)

_KEYWORDS = frozenset({"forall", "exists", "bowtie", "in", "bot"})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}",
                                 line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        col = pos - line_start + 1
        pos = m.end()
        if kind == "newline":
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "punct":
            tokens.append(Token(value, value, line, col))
        elif kind == "ident" and value in _KEYWORDS:
            tokens.append(Token(value, value, line, col))
        else:
            tokens.append(Token(kind, value, line, col))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token plumbing ----------------------------------------------------
    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {kind!r}, found {tok.text!r}", tok)
        return self.next()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise DslSyntaxError(message, tok.line, tok.column)

    def at_end(self) -> bool:
        return self.peek().kind == "eof"

    # -- terms and domain references ---------------------------------------
    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return Var(tok.text)
        if tok.kind == "<":
            self.next()
            state = self.expect("ident").text
            self.expect(",")
            prob = self.parse_rational()
            self.expect(">")
            return Outcome(state, prob)
        if tok.kind == "#":
            self.next()
            return Sharp(self.expect("ident").text)
        self.fail(f"expected a term, found {tok.text!r}", tok)

    def parse_rational(self) -> Fraction:
        tok = self.expect("rational")
        try:
            return Fraction(tok.text)
        except (ValueError, ZeroDivisionError):
            self.fail(f"bad rational literal {tok.text!r}", tok)

    def parse_domain_ref(self) -> str:
        tok = self.peek()
        if tok.kind == "ident":
            self.next()
            return tok.text
        if tok.kind == "{":
            self.next()
            label = self.expect("ident").text
            self.expect("}")
            return "{" + label + "}"
        self.fail(f"expected a domain name, found {tok.text!r}", tok)

    # -- formulas ------------------------------------------------------------
    def parse_formula(self) -> Formula:
        tok = self.peek()
        if tok.kind in ("forall", "exists"):
            self.next()
            var = self.expect("ident").text
            self.expect("in")
            dom = self.parse_domain_ref()
            self.expect(".")
            body = self.parse_formula()
            return (Forall if tok.kind == "forall" else Exists)(var, dom, body)
        if tok.kind == "bowtie":
            self.next()
            var = self.expect("ident").text
            self.expect("in")
            dom = self.parse_domain_ref()
            self.expect("(")
            left = self.parse_formula()
            self.expect(";")
            right = self.parse_formula()
            self.expect(")")
            return Bowtie(var, dom, left, right)
        return self.parse_star()

    def parse_star(self) -> Formula:
        left = self.parse_or()
        if self.peek().kind == "*":
            self.next()
            return Star(left, self.parse_star())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        if self.peek().kind == "orop":
            self.next()
            return Or(left, self.parse_or())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unit()
        if self.peek().kind == "&":
            self.next()
            return And(left, self.parse_and())
        return left

    def parse_unit(self) -> Formula:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            f = self.parse_formula()
            self.expect(")")
            return f
        if tok.kind in ("forall", "exists", "bowtie"):
            self.fail("quantified formula must be parenthesised here "
                      "(quantifiers bind weakest)", tok)
        if tok.kind == "bot":
            self.next()
            return Bot(None)
        if tok.kind == "ident":
            if tok.text.startswith("bot_") and self.peek(1).kind != "(":
                self.next()
                return Bot(tok.text[len("bot_"):])
            if self.peek(1).kind == "(":
                self.next()
                self.next()
                args = [self.parse_term()]
                while self.peek().kind == ",":
                    self.next()
                    args.append(self.parse_term())
                self.expect(")")
                return Atom(tok.text, tuple(args))
        return self.parse_relation()

    def parse_relation(self) -> Formula:
        term = self.parse_term()
        tok = self.peek()
        if tok.kind == "in":
            self.next()
            return Member(term, self.parse_domain_ref())
        if tok.kind == "=":
            self.next()
            return Eq(term, self.parse_term())
        if tok.kind == "neq":
            self.next()
            return Neq(term, self.parse_term())
        self.fail(f"expected 'in', '=' or '!=' after term, found {tok.text!r}", tok)

    # -- sequents ------------------------------------------------------------
    _ITEM_STOPPERS = frozenset({",", "comma_label", "turnstile", "eof"})

    def parse_item(self):
        tok = self.peek()
        if (tok.kind == "ident" and not tok.text.startswith("bot_")
                and self.peek(1).kind in self._ITEM_STOPPERS):
            self.next()
            return ContextVar(tok.text)
        return self.parse_formula()

    def parse_sequent(self) -> Sequent:
        antecedent = []
        if self.peek().kind != "turnstile":
            antecedent.append(self.parse_item())
            while self.peek().kind == ",":
                self.next()
                antecedent.append(self.parse_item())
        self.expect("turnstile")
        succedent = []
        if not self.at_end():
            succedent.append(self.parse_item())
            while True:
                tok = self.peek()
                if tok.kind == ",":
                    self.next()
                    succedent.append(self.parse_item())
                elif tok.kind == "comma_label":
                    self.next()
                    label = tok.text[2:]
                    prev = succedent.pop()
                    nxt = self.parse_item()
                    if isinstance(prev, (ContextVar, Correlated)):
                        self.fail("left side of a correlated comma must be "
                                  "a formula", tok)
                    if not isinstance(nxt, Formula):
                        self.fail("right side of a correlated comma must be "
                                  "a formula", tok)
                    succedent.append(Correlated(label, prev, nxt))
                else:
                    break
        return Sequent(tuple(antecedent), tuple(succedent))


def _validate_names(s: Sequent, table: Optional[DomainTable],
                    predicates: Optional[dict]) -> None:
    def visit(f):
        if isinstance(f, Atom):
            if predicates is not None:
                arity = predicates.get(f.pred)
                if arity is None:
                    raise LookupFailure(f"unknown predicate symbol {f.pred}")
                if arity != len(f.args):
                    raise LookupFailure(
                        f"predicate {f.pred} declared with arity {arity}, "
                        f"used with {len(f.args)}")
        elif isinstance(f, Member):
            if table is not None and f.domain not in table:
                raise LookupFailure(f"unknown domain {f.domain}")
        elif isinstance(f, (And, Or, Star)):
            visit(f.left)
            visit(f.right)
        elif isinstance(f, (Forall, Exists)):
            if table is not None and f.domain not in table:
                raise LookupFailure(f"unknown domain {f.domain}")
            visit(f.body)
        elif isinstance(f, Bowtie):
            if table is not None and f.domain not in table:
                raise LookupFailure(f"unknown domain {f.domain}")
            visit(f.left)
            visit(f.right)

    for item in s.antecedent + s.succedent:
        if isinstance(item, ContextVar):
            continue
        if isinstance(item, Correlated):
            visit(item.left)
            visit(item.right)
        else:
            visit(item)


def parse_sequent(text: str, table: Optional[DomainTable] = None,
                  predicates: Optional[dict] = None) -> Sequent:
    """Parse a sequent; optionally validate names against declarations."""
    p = _Parser(text)
    s = p.parse_sequent()
    if not p.at_end():
        p.fail(f"trailing input {p.peek().text!r}")
    _validate_names(s, table, predicates)
    return s


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.parse_formula()
    if not p.at_end():
        p.fail(f"trailing input {p.peek().text!r}")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.parse_term()
    if not p.at_end():
        p.fail(f"trailing input {p.peek().text!r}")
    return t

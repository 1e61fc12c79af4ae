"""Recursive-descent parser for the concrete formula syntax.

Grammar (loosest binding first)::

    formula := iff
    iff     := imp ("<->" imp)*            left-associative
    imp     := or ("->" imp)?              right-associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := ("!" | "[diff]" | "[net]" | "[sync]") unary | atom
    atom    := "N(" id "," id ")" | "has(" id "," id ")" | "sim(" id "," id ")"
             | "pressure(" id "," id ")" | "psi_diff" | "psi_net" | "psi_diffnet"
             | "psi_netdiff(" nat ")" | "true" | "false" | "(" formula ")"

Unicode aliases: ``¬ ∧ ∨ → ↔ △ □ ○``.
"""

from __future__ import annotations

import re

from .errors import FormulaSyntaxError, UnknownOperator
from .formula import (
    BOTTOM, TOP, And, Dyn, Edge, Formula, Has, Iff, Implies, Not, Or, Pressure, Psi, Sim,
)
from .model import Op

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<bracket>\[[^\]\s]*\]?)
  | (?P<sym><->|->|[!&|(),¬∧∨→↔△□○])
  | (?P<nat>[0-9]+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

_ALIASES = {"¬": "!", "∧": "&", "∨": "|", "→": "->", "↔": "<->",
            "△": "[diff]", "□": "[net]", "○": "[sync]"}
_DYN = {"[diff]": Op.DIFF, "[net]": Op.NET, "[sync]": Op.SYNC}
_PAIR_ATOMS = {"N": Edge, "has": Has, "sim": Sim, "pressure": Pressure}
_PSI = {"psi_diff": "diff", "psi_net": "net", "psi_diffnet": "diffnet"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "bracket":
            if value not in _DYN:
                raise UnknownOperator(f"unknown operator {value!r}", pos)
            kind = "sym"
        if kind == "sym":
            value = _ALIASES.get(value, value)
        if kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, got, pos = self.take()
        if got != value or kind == "eof":
            found = "end of input" if kind == "eof" else repr(got)
            raise FormulaSyntaxError(f"expected {value!r}, found {found}", pos)

    def accept(self, value: str) -> bool:
        kind, got, _ = self.peek()
        if kind == "sym" and got == value:
            self.i += 1
            return True
        return False

    def formula(self) -> Formula:
        phi = self.imp()
        while self.accept("<->"):
            phi = Iff(phi, self.imp())
        return phi

    def imp(self) -> Formula:
        phi = self.disjunction()
        if self.accept("->"):
            return Implies(phi, self.imp())
        return phi

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.accept("|"):
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self.accept("&"):
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "sym" and value == "!":
            self.i += 1
            return Not(self.unary())
        if kind == "sym" and value in _DYN:
            self.i += 1
            return Dyn(_DYN[value], self.unary())
        return self.atom()

    def ident(self) -> str:
        kind, value, pos = self.take()
        if kind != "id":
            found = "end of input" if kind == "eof" else repr(value)
            raise FormulaSyntaxError(f"expected identifier, found {found}", pos)
        return value

    def atom(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "sym" and value == "(":
            phi = self.formula()
            self.expect(")")
            return phi
        if kind == "id":
            if value in _PAIR_ATOMS:
                self.expect("(")
                first = self.ident()
                self.expect(",")
                second = self.ident()
                self.expect(")")
                return _PAIR_ATOMS[value](first, second)
            if value in _PSI:
                return Psi(_PSI[value])
            if value == "psi_netdiff":
                self.expect("(")
                nkind, nat, npos = self.take()
                if nkind != "nat":
                    raise FormulaSyntaxError("expected natural number", npos)
                self.expect(")")
                return Psi("netdiff", int(nat))
            if value == "true":
                return TOP
            if value == "false":
                return BOTTOM
            raise FormulaSyntaxError(f"unknown atom {value!r}", pos)
        found = "end of input" if kind == "eof" else repr(value)
        raise FormulaSyntaxError(f"expected a formula, found {found}", pos)


def parse(text: str) -> Formula:
    """Parse formula text; raises :class:`FormulaSyntaxError` with an offset."""
    p = _Parser(text)
    phi = p.formula()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)
    return phi

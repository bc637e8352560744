"""Parser for boolean formulas over named atoms.

Grammar (EBNF):

    expr    := term ("|" term)*
    term    := factor ("&" factor)*
    factor  := "!" factor | "(" expr ")" | atom
    atom    := [A-Za-z_][A-Za-z0-9_]*

"&" binds tighter than "|"; "!" binds tightest.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[!&|()]))")


class FormulaError(ValueError):
    """Raised when a formula string cannot be parsed."""


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise FormulaError(f"unexpected character {text[pos:].strip()[0]!r} in formula {text!r}")
            break
        tokens.append(m.group("atom") or m.group("punct"))
        pos = m.end()
    return tokens


def parse(text: str) -> tuple:
    """Parse a formula string into a nested-tuple AST.

    Nodes are ("atom", name), ("not", node), ("and", a, b), ("or", a, b).
    """
    tokens = tokenize(text)
    if not tokens:
        raise FormulaError("empty formula")
    node, rest = _parse_or(tokens)
    if rest:
        raise FormulaError(f"trailing tokens {rest!r} in formula {text!r}")
    return node


def _parse_or(tokens):
    node, tokens = _parse_and(tokens)
    while tokens and tokens[0] == "|":
        rhs, tokens = _parse_and(tokens[1:])
        node = ("or", node, rhs)
    return node, tokens


def _parse_and(tokens):
    node, tokens = _parse_factor(tokens)
    while tokens and tokens[0] == "&":
        rhs, tokens = _parse_factor(tokens[1:])
        node = ("and", node, rhs)
    return node, tokens


def _parse_factor(tokens):
    if not tokens:
        raise FormulaError("unexpected end of formula")
    head = tokens[0]
    if head == "!":
        node, rest = _parse_factor(tokens[1:])
        return ("not", node), rest
    if head == "(":
        node, rest = _parse_or(tokens[1:])
        if not rest or rest[0] != ")":
            raise FormulaError("unbalanced parentheses")
        return node, rest[1:]
    if head in {"&", "|", ")"}:
        raise FormulaError(f"unexpected token {head!r}")
    return ("atom", head), tokens[1:]


def atom_names(node: tuple) -> set[str]:
    kind = node[0]
    if kind == "atom":
        return {node[1]}
    if kind == "not":
        return atom_names(node[1])
    return atom_names(node[1]) | atom_names(node[2])


def unparse(node: tuple) -> str:
    """Render an AST back to the concrete syntax (fully parenthesized binaries)."""
    kind = node[0]
    if kind == "atom":
        return node[1]
    if kind == "not":
        inner = unparse(node[1])
        if node[1][0] != "atom":
            inner = f"({inner})"
        return f"!{inner}"
    op = "&" if kind == "and" else "|"
    return f"({unparse(node[1])} {op} {unparse(node[2])})"

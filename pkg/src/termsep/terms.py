"""Groupoid term trees: parsing, paths, shapes, and ordered-term enumeration.

A term is a full binary tree with variable names at the leaves.  Nodes are
addressed by paths, strings over 'l'/'r' with the empty string for the root
(rendered as '^' in human-facing output).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

SENTINEL = "χ"  # the shape placeholder variable, ASCII alias "chi"

MAX_ENUM_VARS = 16


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidPathError(ValueError):
    pass


class Term:
    """Base class; instances are Var or Mul."""

    __slots__ = ()

    def __mul__(self, other: "Term") -> "Term":
        return Mul(self, other)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Mul({self.left!r}, {self.right!r})"


def variables(t: Term) -> list[str]:
    """Distinct variable names of t, sorted shortest-then-lexicographic.

    This key orders x1..x9, x10, x11.. the intuitive way and is the
    canonical variable order used for counterexample enumeration.
    """
    seen = {name for _, name in occurrences(t)}
    return sorted(seen, key=var_key)


def var_key(name: str):
    return (len(name), name)


def occurrences(t: Term) -> list[tuple[str, str]]:
    """All leaves of t as (path, variable name), left to right."""
    out: list[tuple[str, str]] = []

    def walk(node: Term, path: str):
        if isinstance(node, Var):
            out.append((path, node.name))
        else:
            walk(node.left, path + "l")
            walk(node.right, path + "r")

    walk(t, "")
    return out


def subterm_at(t: Term, path: str) -> Term:
    node = t
    for i, step in enumerate(path):
        if isinstance(node, Var):
            raise InvalidPathError(f"path {path!r} leaves the tree after {path[:i]!r}")
        if step == "l":
            node = node.left
        elif step == "r":
            node = node.right
        else:
            raise InvalidPathError(f"bad path character {step!r} in {path!r}")
    return node


def shape_of(t: Term) -> Term:
    """Same tree with every leaf replaced by the sentinel variable."""
    if isinstance(t, Var):
        return Var(SENTINEL)
    return Mul(shape_of(t.left), shape_of(t.right))


def is_prefix(q: str, p: str) -> bool:
    return p.startswith(q)


def is_proper_prefix(q: str, p: str) -> bool:
    return len(q) < len(p) and p.startswith(q)


# --- text syntax -----------------------------------------------------------
#
#   term := factor | factor '*' factor        (top level only)
#   factor := var | '(' term '*' term ')'

def parse_term(text: str) -> Term:
    parser = _Parser(text)
    term = parser.parse_top()
    parser.expect_end()
    return term


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_top(self) -> Term:
        left = self.parse_factor()
        if self.peek() == "*":
            self.pos += 1
            right = self.parse_factor()
            return Mul(left, right)
        return left

    def parse_factor(self) -> Term:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            left = self.parse_factor()
            if self.peek() != "*":
                raise ParseError("expected '*'", self.pos)
            self.pos += 1
            right = self.parse_factor()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return Mul(left, right)
        if ch.isalpha():
            start = self.pos
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            return Var(SENTINEL if name == "chi" else name)
        raise ParseError("expected variable or '('", self.pos)

    def expect_end(self):
        if self.peek() != "":
            raise ParseError("trailing input", self.pos)


def render_term(t: Term) -> str:
    """Inverse of parse_term; outermost parentheses omitted."""

    def inner(node: Term) -> str:
        if isinstance(node, Var):
            return node.name
        return f"({inner(node.left)}*{inner(node.right)})"

    if isinstance(t, Mul):
        return f"{inner(t.left)}*{inner(t.right)}"
    return inner(t)


def term_to_json(t: Term):
    """Nested two-element lists with variable names at the leaves."""
    if isinstance(t, Var):
        return t.name
    return [term_to_json(t.left), term_to_json(t.right)]


def term_from_json(obj) -> Term:
    if isinstance(obj, str):
        return Var(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return Mul(term_from_json(obj[0]), term_from_json(obj[1]))
    raise ValueError(f"not a term encoding: {obj!r}")


# --- ordered terms ---------------------------------------------------------

def catalan(m: int) -> int:
    if m < 0:
        raise ValueError("m must be nonnegative")
    return math.comb(2 * m, m) // (m + 1)


def enumerate_ordered_terms(k: int) -> list[Term]:
    """All ordered terms on x1..xk, each exactly once.

    Output order matches the customary listing: at every node the right
    factor grows from a single variable upward, so for k=4 the first term
    is ((x1*x2)*x3)*x4 and the last is x1*(x2*(x3*x4)).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > MAX_ENUM_VARS:
        raise ValueError(f"k={k} exceeds enumeration bound {MAX_ENUM_VARS}")
    return list(_enum_range(1, k))


@lru_cache(maxsize=None)
def _enum_range(lo: int, hi: int) -> tuple[Term, ...]:
    if lo == hi:
        return (Var(f"x{lo}"),)
    out = []
    for split in range(hi - 1, lo - 1, -1):
        for left in _enum_range(lo, split):
            for right in _enum_range(split + 1, hi):
                out.append(Mul(left, right))
    return tuple(out)


def is_ordered_term(t: Term) -> bool:
    names = [name for _, name in occurrences(t)]
    return names == [f"x{i}" for i in range(1, len(names) + 1)]


def leftmost_disagreement(s: Term, t: Term) -> tuple[int, str, str]:
    """First variable position where two ordered terms place paths apart.

    Returns (m, path_in_s, path_in_t) for the 1-based index m of the
    leftmost variable whose paths differ.  One path is always a proper
    initial substring of the other.
    """
    if not (is_ordered_term(s) and is_ordered_term(t)):
        raise ValueError("inputs must be ordered terms on x1..xk")
    occ_s = occurrences(s)
    occ_t = occurrences(t)
    if len(occ_s) != len(occ_t):
        raise ValueError("ordered terms must share one variable list")
    for i, ((ps, _), (pt, _)) in enumerate(zip(occ_s, occ_t)):
        if ps != pt:
            return i + 1, ps, pt
    raise ValueError("terms are equal")

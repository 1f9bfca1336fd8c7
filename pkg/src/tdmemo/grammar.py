"""Grammar data model, the text format loader, and static analyses.

A grammar maps each nonterminal name to a single right-hand-side expression
built from ``Terminal``, ``Ref``, ``Seq``, ``Alt``, ``Opt``, ``Star`` and
``Eps``.  Terminal words are folded to lower case both here and when input
is tokenized, so ``"Kim"`` in a grammar file matches ``kim`` on input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Terminal", "Ref", "Seq", "Alt", "Opt", "Star", "Eps", "RhsExpr",
    "Grammar", "GrammarError", "tokenize", "parse_grammar_text",
    "load_grammar", "format_grammar", "format_rhs", "nullable_set",
    "is_nullable", "left_recursive_nonterminals", "refs_in",
]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class GrammarError(ValueError):
    """Raised for malformed grammar text or an invalid grammar structure."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Terminal:
    word: str

    def __post_init__(self):
        if not self.word or any(c.isspace() for c in self.word):
            raise GrammarError(f"invalid terminal word {self.word!r}")


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Seq:
    items: tuple

    def __post_init__(self):
        if len(self.items) < 2:
            raise GrammarError("Seq needs at least two items")


@dataclass(frozen=True)
class Alt:
    items: tuple

    def __post_init__(self):
        if len(self.items) < 2:
            raise GrammarError("Alt needs at least two items")


@dataclass(frozen=True)
class Opt:
    item: "RhsExpr"


@dataclass(frozen=True)
class Star:
    item: "RhsExpr"


@dataclass(frozen=True)
class Eps:
    pass


RhsExpr = Union[Terminal, Ref, Seq, Alt, Opt, Star, Eps]


def seq(*items: RhsExpr) -> RhsExpr:
    """Build a sequence, collapsing the degenerate one-item case."""
    if not items:
        return Eps()
    return items[0] if len(items) == 1 else Seq(tuple(items))


def alt(*items: RhsExpr) -> RhsExpr:
    return items[0] if len(items) == 1 else Alt(tuple(items))


def children(expr: RhsExpr) -> tuple:
    if isinstance(expr, (Seq, Alt)):
        return expr.items
    if isinstance(expr, (Opt, Star)):
        return (expr.item,)
    return ()


def walk(expr: RhsExpr) -> Iterator[RhsExpr]:
    """Pre-order traversal of an expression tree."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def refs_in(expr: RhsExpr) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, Ref)}


@dataclass(frozen=True, eq=False)
class Grammar:
    """Nonterminal name -> body expression, plus a start symbol.

    ``rules`` keeps definition order, which is also the order used by the
    pretty printer and by ``nonterminals``.
    """

    rules: Mapping[str, RhsExpr]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "rules", MappingProxyType(dict(self.rules)))
        if self.start not in self.rules:
            raise GrammarError(f"start symbol {self.start!r} is not defined")
        for name, body in self.rules.items():
            if not NAME_RE.fullmatch(name) or name == "eps":
                raise GrammarError(f"invalid nonterminal name {name!r}")
            missing = sorted(refs_in(body) - self.rules.keys())
            if missing:
                raise GrammarError(
                    f"rule {name!r} refers to undefined nonterminal {missing[0]!r}")

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.start == other.start and dict(self.rules) == dict(other.rules)

    def __hash__(self):
        return hash((self.start, tuple(self.rules.items())))

    @property
    def nonterminals(self) -> tuple[str, ...]:
        return tuple(self.rules)

    @property
    def terminals(self) -> frozenset[str]:
        return frozenset(node.word for body in self.rules.values()
                         for node in walk(body) if isinstance(node, Terminal))

    def with_start(self, start: str) -> "Grammar":
        return Grammar(self.rules, start)

    def __str__(self):
        return format_grammar(self)


# --- text format -----------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<punct>[|;()?*])
  | (?P<word>"[^"\s]*")
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
""", re.VERBOSE)


def _lex(source: str) -> Iterator[tuple[str, str, int, int]]:
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            col = pos - line_start + 1
            if source[pos] == '"':
                raise GrammarError("unterminated or malformed terminal", line, col)
            raise GrammarError(f"unexpected character {source[pos]!r}", line, col)
        kind, text = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            yield kind if kind != "punct" else text, text, line, pos - line_start + 1
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, source: str):
        self.tokens = list(_lex(source))
        self.i = 0

    @property
    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise GrammarError(f"expected {kind!r}, found {what}", tok[2], tok[3])
        self.i += 1
        return tok

    def rules(self):
        while self.peek[0] != "eof":
            head = self.take("name")
            if head[1] == "eps":
                raise GrammarError("'eps' cannot be a rule head", head[2], head[3])
            self.take("arrow")
            extend = self.peek[0] == "|"
            if extend:
                self.i += 1
            body = self.rhs()
            self.take(";")
            yield head, extend, body

    def rhs(self) -> RhsExpr:
        alts = [self.sequence()]
        while self.peek[0] == "|":
            self.i += 1
            alts.append(self.sequence())
        return alt(*alts)

    def sequence(self) -> RhsExpr:
        items = []
        while self.peek[0] in ("name", "word", "("):
            items.append(self.item())
        if not items:
            tok = self.peek
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise GrammarError(f"expected an item, found {what} (use 'eps' for empty)",
                               tok[2], tok[3])
        return seq(*items)

    def item(self) -> RhsExpr:
        kind, text, _, _ = self.peek
        self.i += 1
        if kind == "(":
            expr = self.rhs()
            self.take(")")
        elif kind == "word":
            word = text[1:-1]
            if not word:
                raise GrammarError("empty terminal", self.tokens[self.i - 1][2],
                                   self.tokens[self.i - 1][3])
            expr = Terminal(word.lower())
        elif text == "eps":
            expr = Eps()
        else:
            expr = Ref(text)
        while self.peek[0] in ("?", "*"):
            expr = Opt(expr) if self.peek[0] == "?" else Star(expr)
            self.i += 1
        return expr


def parse_grammar_text(source: str, start: str | None = None) -> Grammar:
    """Parse grammar text into a :class:`Grammar`.

    A rule is ``Name -> alt | alt ... ;`` and may span several lines.  A
    second rule for the same head is an error unless its body starts with
    ``|`` (``Name -> | more ;``), in which case its alternatives are appended.
    The first head is the start symbol unless ``start`` is given.
    """
    rules: dict[str, list[RhsExpr]] = {}
    where: dict[str, tuple[int, int]] = {}
    for (_, name, line, col), extend, body in _Parser(source).rules():
        if name in rules:
            if not extend:
                raise GrammarError(f"duplicate rule for {name!r} "
                                   "(continue it with 'Name -> | ...')", line, col)
            rules[name].append(body)
        else:
            if extend:
                raise GrammarError(f"continuation of undefined rule {name!r}", line, col)
            rules[name] = [body]
            where[name] = (line, col)
    if not rules:
        raise GrammarError("grammar has no rules")
    merged = {}
    for name, bodies in rules.items():
        flat = []
        for body in bodies:
            flat.extend(body.items if isinstance(body, Alt) and len(bodies) > 1 else (body,))
        merged[name] = alt(*flat)
    for name, body in merged.items():
        for ref in sorted(refs_in(body) - merged.keys()):
            raise GrammarError(f"undefined nonterminal {ref!r} in rule {name!r}", *where[name])
    if start is None:
        start = next(iter(merged))
    elif start not in merged:
        raise GrammarError(f"start symbol {start!r} is not defined")
    return Grammar(merged, start)


def load_grammar(path, start: str | None = None) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar_text(fh.read(), start)


def format_rhs(expr: RhsExpr) -> str:
    if isinstance(expr, Terminal):
        return f'"{expr.word}"'
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Eps):
        return "eps"
    if isinstance(expr, Alt):
        return " | ".join(f"( {format_rhs(x)} )" if isinstance(x, Alt) else format_rhs(x)
                          for x in expr.items)
    if isinstance(expr, Seq):
        return " ".join(f"( {format_rhs(x)} )" if isinstance(x, (Seq, Alt)) else format_rhs(x)
                        for x in expr.items)
    inner = format_rhs(expr.item)
    if isinstance(expr.item, (Seq, Alt)):
        inner = f"( {inner} )"
    return inner + ("?" if isinstance(expr, Opt) else "*")


def format_grammar(g: Grammar) -> str:
    """Render ``g`` in the text format, start rule first."""
    order = [g.start] + [name for name in g.rules if name != g.start]
    return "".join(f"{name} -> {format_rhs(g.rules[name])} ;\n" for name in order)


# --- analyses --------------------------------------------------------------

def is_nullable(expr: RhsExpr, nullable: Iterable[str]) -> bool:
    if isinstance(expr, (Eps, Opt, Star)):
        return True
    if isinstance(expr, Terminal):
        return False
    if isinstance(expr, Ref):
        return expr.name in nullable
    if isinstance(expr, Seq):
        return all(is_nullable(x, nullable) for x in expr.items)
    return any(is_nullable(x, nullable) for x in expr.items)


def nullable_set(g: Grammar) -> frozenset[str]:
    """Nonterminals that derive the empty token sequence (monotone fixpoint)."""
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for name, body in g.rules.items():
            if name not in nullable and is_nullable(body, nullable):
                nullable.add(name)
                changed = True
    return frozenset(nullable)


def left_corners(expr: RhsExpr, nullable: frozenset[str]) -> set[str]:
    """Nonterminals that can be called at the left edge of ``expr``.

    A sequence item counts when every item before it is nullable, so hidden
    left recursion through nullable prefixes is included.
    """
    if isinstance(expr, Ref):
        return {expr.name}
    if isinstance(expr, (Terminal, Eps)):
        return set()
    if isinstance(expr, (Opt, Star)):
        return left_corners(expr.item, nullable)
    out: set[str] = set()
    for item in expr.items:
        out |= left_corners(item, nullable)
        if isinstance(expr, Seq) and not is_nullable(item, nullable):
            break
    return out


def left_recursive_nonterminals(g: Grammar) -> frozenset[str]:
    nullable = nullable_set(g)
    edges = {name: left_corners(body, nullable) for name, body in g.rules.items()}
    result = set()
    for name in g.rules:
        seen: set[str] = set()
        stack = list(edges[name])
        while stack:
            b = stack.pop()
            if b == name:
                result.add(name)
                break
            if b not in seen:
                seen.add(b)
                stack.extend(edges[b])
    return frozenset(result)


def star_over_nullable(g: Grammar) -> list[tuple[str, Star]]:
    """``(rule, node)`` pairs for every ``Star`` whose body derives empty."""
    nullable = nullable_set(g)
    return [(name, node) for name, body in g.rules.items() for node in walk(body)
            if isinstance(node, Star) and is_nullable(node.item, nullable)]


def tokenize(text: str | Iterable[str]) -> tuple[str, ...]:
    """Split on whitespace (if given a string) and fold to lower case."""
    words = text.split() if isinstance(text, str) else text
    return tuple(w.lower() for w in words)

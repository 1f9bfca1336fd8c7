"""Brute-force ground truth: every span every nonterminal derives.

Nothing here shares code with the recognizer engines.  The grammar is
flattened into binary nodes and a least fixpoint over a dense
(node, left, right) boolean table is computed by :mod:`tdmemo._kernels`.
:func:`prediction_closure` then walks rule bodies against those facts to
find every (nonterminal, position) pair a top-down recognizer would call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .grammar import Alt, Eps, Grammar, Opt, Ref, RhsExpr, Seq, Star, Terminal

SpanFact = tuple  # (nonterminal, left, right)


@dataclass(frozen=True)
class CompiledGrammar:
    names: tuple[str, ...]      # node i < len(names) is nonterminal names[i]
    kind: np.ndarray
    a: np.ndarray
    b: np.ndarray
    vocab: dict

    def token_ids(self, tokens) -> np.ndarray:
        return np.array([self.vocab.get(t, -1) for t in tokens], dtype=np.int64)


def compile_nodes(g: Grammar) -> CompiledGrammar:
    names = tuple(g.rules)
    index = {name: i for i, name in enumerate(names)}
    kind, a, b = [K.NT] * len(names), [0] * len(names), [0] * len(names)
    vocab: dict[str, int] = {}

    def node(k, x=0, y=0):
        kind.append(k)
        a.append(x)
        b.append(y)
        return len(kind) - 1

    def build(expr: RhsExpr) -> int:
        if isinstance(expr, Ref):
            return index[expr.name]
        if isinstance(expr, Terminal):
            return node(K.TERM, vocab.setdefault(expr.word, len(vocab)))
        if isinstance(expr, Eps):
            return node(K.EPS)
        if isinstance(expr, Opt):
            return node(K.OPT, build(expr.item))
        if isinstance(expr, Star):
            return node(K.STAR, build(expr.item))
        k = K.SEQ if isinstance(expr, Seq) else K.ALT
        right = build(expr.items[-1])
        for item in reversed(expr.items[:-1]):
            right = node(k, build(item), right)
        return right

    for name in names:
        a[index[name]] = build(g.rules[name])
    return CompiledGrammar(names, np.array(kind), np.array(a), np.array(b), vocab)


def span_table(g: Grammar, tokens, order=None, backend: str | None = None):
    """The raw fixpoint table and the compiled grammar it indexes."""
    cg = compile_nodes(g)
    if order is None:
        order = np.arange(len(cg.kind))
    table = K.fixpoint(cg.kind, cg.a, cg.b, order, cg.token_ids(tokens), len(tokens), backend)
    return table, cg


def oracle_derives(g: Grammar, tokens, order=None, backend: str | None = None) -> frozenset:
    """All ``(A, l, r)`` with ``A =>* tokens[l:r]``."""
    table, cg = span_table(g, tokens, order, backend)
    nts = table[:len(cg.names)]
    return frozenset((cg.names[i], int(l), int(r)) for i, l, r in zip(*np.nonzero(nts)))


def oracle_positions(g: Grammar, tokens, backend: str | None = None) -> frozenset[int]:
    return frozenset(r for name, l, r in oracle_derives(g, tokens, backend=backend)
                     if name == g.start and l == 0)


def prediction_closure(g: Grammar, tokens, facts) -> set[tuple[str, int]]:
    """(nonterminal, position) pairs a predictive parser would predict.

    Starts from ``(start, 0)``.  For each predicted ``(A, l)`` the body of
    ``A`` is walked left to right from ``l``; a reference to ``B`` reached
    at position ``m`` (``m`` reachable by deriving the preceding part of the
    body, according to ``facts``) predicts ``(B, m)``.
    """
    tokens = tuple(tokens)
    n = len(tokens)
    ends: dict[tuple[str, int], set[int]] = {}
    for name, l, r in facts:
        ends.setdefault((name, l), set()).add(r)

    predicted: set[tuple[str, int]] = set()
    agenda: list[tuple[str, int]] = []

    def predict(name: str, m: int):
        if (name, m) not in predicted:
            predicted.add((name, m))
            agenda.append((name, m))

    def walk(expr: RhsExpr, starts: set[int]) -> set[int]:
        if not starts:
            return set()
        if isinstance(expr, Terminal):
            return {l + 1 for l in starts if l < n and tokens[l] == expr.word}
        if isinstance(expr, Eps):
            return set(starts)
        if isinstance(expr, Ref):
            out: set[int] = set()
            for m in starts:
                predict(expr.name, m)
                out |= ends.get((expr.name, m), set())
            return out
        if isinstance(expr, Seq):
            for item in expr.items:
                starts = walk(item, starts)
            return starts
        if isinstance(expr, Alt):
            out = set()
            for item in expr.items:
                out |= walk(item, starts)
            return out
        if isinstance(expr, Opt):
            return set(starts) | walk(expr.item, starts)
        # Star: iterate the body from every newly reached position
        reached, frontier = set(starts), set(starts)
        while frontier:
            frontier = walk(expr.item, frontier) - reached
            reached |= frontier
        return reached

    predict(g.start, 0)
    while agenda:
        name, l = agenda.pop()
        walk(g.rules[name], {l})
    return predicted

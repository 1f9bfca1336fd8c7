"""Set-valued recognizer combinators and argument->value memoization.

A set recognizer is a callable ``rec(session, l) -> mask`` where ``mask`` is
an ``int`` whose bit ``r`` is set iff the recognized category spans
``l..r``.  Using integers as bit sets gives deduplicated unions for free.

These recognizers are plain top-down backtrackers: on a left-recursive
grammar they recurse without end, which shows up here as
:class:`~tdmemo.session.FuelExhausted`.  Memoizing them does not help,
because the cache entry is written only after the body returns.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .grammar import (Eps, Grammar, GrammarError, Opt, Ref, RhsExpr, Seq, Star,
                      Terminal, format_rhs, star_over_nullable)
from .session import Session

SetRecognizer = Callable[[Session, int], int]

DEFAULT_FUEL = 10**7


class NullableStarError(GrammarError):
    """``Star`` over a body that accepts the empty string."""


def bits(mask: int) -> Iterator[int]:
    """Positions present in ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def positions(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def mask_of(ps) -> int:
    out = 0
    for p in ps:
        out |= 1 << p
    return out


def set_terminal(word: str) -> SetRecognizer:
    if not word:
        raise ValueError("terminal word must be non-empty")

    def rec(s: Session, l: int) -> int:
        s.tick()
        if l < s.n and s.tokens[l] == word:
            return 1 << (l + 1)
        return 0
    return rec


def set_seq(a: SetRecognizer, b: SetRecognizer) -> SetRecognizer:
    def rec(s: Session, l: int) -> int:
        s.tick()
        out = 0
        for m in bits(a(s, l)):
            out |= b(s, m)
            s.counters.unions += 1
        return out
    return rec


def set_alt(a: SetRecognizer, b: SetRecognizer) -> SetRecognizer:
    def rec(s: Session, l: int) -> int:
        s.tick()
        s.counters.unions += 1
        return a(s, l) | b(s, l)
    return rec


def set_epsilon() -> SetRecognizer:
    def rec(s: Session, l: int) -> int:
        s.tick()
        return 1 << l
    return rec


def set_opt(a: SetRecognizer) -> SetRecognizer:
    def rec(s: Session, l: int) -> int:
        s.tick()
        s.counters.unions += 1
        return (1 << l) | a(s, l)
    return rec


def set_star(a: SetRecognizer) -> SetRecognizer:
    """Zero or more ``a``: ``{l}`` united with ``star(a)(m)`` for each ``m`` in ``a(l)``.

    Raises :class:`NullableStarError` if ``a`` matches the empty string,
    where the recursion would otherwise never bottom out.
    """
    def rec(s: Session, l: int) -> int:
        s.tick()
        first = a(s, l)
        if first >> l & 1:
            raise NullableStarError("star body matched the empty string")
        out = 1 << l
        for m in bits(first):
            out |= rec(s, m)
            s.counters.unions += 1
        return out
    return rec


def memoize_set(r: SetRecognizer, key=None, name: str | None = None) -> SetRecognizer:
    """Cache ``r``'s result per (session, position).

    The cache is written after ``r`` returns, so a re-entrant call at the
    same position (left recursion) still evaluates ``r`` again.  When
    ``name`` is given, each evaluation of ``r`` is counted against it.
    """
    key = object() if key is None else key

    def rec(s: Session, l: int) -> int:
        cache = s.memo.get(key)
        if cache is None:
            cache = s.memo[key] = {}
        if l in cache:
            return cache[l]
        if name is None:
            out = r(s, l)
        elif s.trace is None:
            s.evaluated(name, l)
            out = r(s, l)
        else:
            out = _evaluate(s, name, r, l)
        cache[l] = out
        s.counters.memo_keys += 1
        return out
    return rec


def _evaluate(s: Session, name: str, body: SetRecognizer, l: int) -> int:
    s.evaluated(name, l)
    if s.trace is None:
        return body(s, l)
    s.emit("enter", name, l)
    out = body(s, l)
    for r in bits(out):
        s.emit("deliver", name, l, r)
    return out


def _nonterminal(table: dict, name: str, memoized: bool) -> SetRecognizer:
    # One frame per nonterminal application keeps deep left recursion cheap.
    if memoized:
        def rec(s: Session, l: int) -> int:
            s.tick()
            s.counters.calls += 1
            return table[name](s, l)
    else:
        def rec(s: Session, l: int) -> int:
            s.tick()
            s.counters.calls += 1
            if s.trace is not None:
                return _evaluate(s, name, table[name], l)
            s.evaluated(name, l)
            return table[name](s, l)
    return rec


def _compile(expr: RhsExpr, refs: dict[str, SetRecognizer]) -> SetRecognizer:
    if isinstance(expr, Terminal):
        return set_terminal(expr.word)
    if isinstance(expr, Ref):
        return refs[expr.name]
    if isinstance(expr, Eps):
        return set_epsilon()
    if isinstance(expr, Opt):
        return set_opt(_compile(expr.item, refs))
    if isinstance(expr, Star):
        return set_star(_compile(expr.item, refs))
    parts = [_compile(x, refs) for x in expr.items]
    combine = set_seq if isinstance(expr, Seq) else set_alt
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = combine(part, out)
    return out


def compile_set_engine(g: Grammar, memoize: bool = False) -> dict[str, SetRecognizer]:
    """Translate every rule of ``g`` into set combinators.

    The returned recognizers are nonterminal applications: each costs one
    unit of fuel before running (or looking up) the rule body.
    """
    bad = star_over_nullable(g)
    if bad:
        name, node = bad[0]
        raise NullableStarError(
            f"rule {name!r}: '{format_rhs(node)}' repeats a body that can match "
            "the empty string")
    bodies: dict[str, SetRecognizer] = {}
    refs = {name: _nonterminal(bodies, name, memoize) for name in g.rules}
    for name, expr in g.rules.items():
        body = _compile(expr, refs)
        bodies[name] = memoize_set(body, key=name, name=name) if memoize else body
    return refs


def run_set(g: Grammar, tokens, *, memoize: bool = False, fuel: int = DEFAULT_FUEL,
            trace=None) -> tuple[frozenset[int], Session]:
    """Right positions of ``g.start`` from position 0, plus the finished session."""
    engine = compile_set_engine(g, memoize)
    s = Session(tokens, fuel=fuel, trace=trace)
    mask = s.run(lambda sess: engine[g.start](sess, 0))
    return positions(mask), s


def set_recognize(g: Grammar, tokens, fuel: int = DEFAULT_FUEL, memoize: bool = False) -> bool:
    found, s = run_set(g, tokens, memoize=memoize, fuel=fuel)
    return s.n in found

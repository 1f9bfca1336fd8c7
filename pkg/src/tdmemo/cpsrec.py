"""Continuation-passing recognizer combinators.

A CPS recognizer is ``rec(session, k, l)``: it calls ``k(r)`` once for each
way it finds a right position ``r`` and returns nothing.  Delivery order
is depth-first, left to right (``alt`` delivers its first branch before
its second).  Unmemoized recognizers may deliver the same ``r`` more than
once; :func:`tdmemo.memo.cps_memo` removes the duplicates.
"""

from __future__ import annotations

from .grammar import (Alt, Eps, Grammar, GrammarError, Opt, Ref, RhsExpr, Seq, Star,
                      Terminal, format_rhs, left_recursive_nonterminals, star_over_nullable)
from .memo import Continuation, CpsRecognizer, cps_memo
from .session import Session
from .setrec import DEFAULT_FUEL, NullableStarError


class LeftRecursionError(GrammarError):
    """Left-recursive grammar given to the unmemoized CPS engine."""

    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(
            "left-recursive nonterminals " + ", ".join(self.names)
            + ": an unmemoized top-down recognizer would not terminate")


def cps_terminal(word: str) -> CpsRecognizer:
    if not word:
        raise ValueError("terminal word must be non-empty")

    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        if l < s.n and s.tokens[l] == word:
            s.counters.deliveries += 1
            k(l + 1)
    return rec


def cps_seq(a: CpsRecognizer, b: CpsRecognizer) -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        a(s, lambda m: b(s, k, m), l)
    return rec


def cps_alt(a: CpsRecognizer, b: CpsRecognizer) -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        a(s, k, l)
        b(s, k, l)
    return rec


def cps_epsilon() -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        s.counters.deliveries += 1
        k(l)
    return rec


def cps_opt(a: CpsRecognizer) -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        s.counters.deliveries += 1
        k(l)
        a(s, k, l)
    return rec


def cps_star(a: CpsRecognizer) -> CpsRecognizer:
    """Unmemoized ``a*``, i.e. ``eps | a a*`` by direct recursion.

    Grammars go through :func:`compile_cps_engine`, which turns each ``*``
    into a named rule instead; this standalone form refuses nullable bodies.
    """
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        s.counters.deliveries += 1
        k(l)

        def more(m: int):
            if m == l:
                raise NullableStarError("star body matched the empty string")
            rec(s, k, m)
        a(s, more, l)
    return rec


def desugar_stars(g: Grammar) -> dict[str, RhsExpr]:
    """Rules of ``g`` with each ``X*`` replaced by a fresh rule ``A*i -> eps | X A*i``.

    The fresh names contain ``*`` and so cannot clash with grammar names.
    """
    rules: dict[str, RhsExpr] = {}
    counter = {}

    def rewrite(owner: str, expr: RhsExpr) -> RhsExpr:
        if isinstance(expr, Star):
            counter[owner] = counter.get(owner, 0) + 1
            aux = f"{owner}*{counter[owner]}"
            item = rewrite(owner, expr.item)
            rules[aux] = Alt((Eps(), Seq((item, Ref(aux)))))
            return Ref(aux)
        if isinstance(expr, Opt):
            return Opt(rewrite(owner, expr.item))
        if isinstance(expr, (Seq, Alt)):
            return type(expr)(tuple(rewrite(owner, x) for x in expr.items))
        return expr

    for name, body in g.rules.items():
        rules[name] = rewrite(name, body)
    # user rules first, helpers after, each in creation order
    return {**{n: rules[n] for n in g.rules}, **{n: b for n, b in rules.items() if n not in g.rules}}


def _nonterminal(table: dict, name: str) -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.tick()
        s.counters.calls += 1
        table[name](s, k, l)
    return rec


def _body(name: str, body: CpsRecognizer, report_deliveries: bool) -> CpsRecognizer:
    def rec(s: Session, k: Continuation, l: int):
        s.evaluated(name, l)
        if s.trace is None:
            body(s, k, l)
            return
        s.emit("enter", name, l)
        if report_deliveries:
            outer = k

            def k(r: int):
                s.emit("deliver", name, l, r)
                outer(r)
        body(s, k, l)
    return rec


def _compile(expr: RhsExpr, refs: dict[str, CpsRecognizer]) -> CpsRecognizer:
    if isinstance(expr, Terminal):
        return cps_terminal(expr.word)
    if isinstance(expr, Ref):
        return refs[expr.name]
    if isinstance(expr, Eps):
        return cps_epsilon()
    if isinstance(expr, Opt):
        return cps_opt(_compile(expr.item, refs))
    if isinstance(expr, Star):
        return cps_star(_compile(expr.item, refs))
    parts = [_compile(x, refs) for x in expr.items]
    combine = cps_seq if isinstance(expr, Seq) else cps_alt
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = combine(part, out)
    return out


def compile_cps_engine(g: Grammar, memoize: bool = True) -> dict[str, CpsRecognizer]:
    """Translate ``g`` into CPS recognizers, one per (possibly auxiliary) nonterminal.

    With ``memoize`` off, left-recursive grammars and ``*`` over nullable
    bodies are rejected up front, since the resulting recognizer would not
    terminate.
    """
    if not memoize:
        lr = left_recursive_nonterminals(g)
        if lr:
            raise LeftRecursionError(lr)
        bad = star_over_nullable(g)
        if bad:
            name, node = bad[0]
            raise NullableStarError(
                f"rule {name!r}: '{format_rhs(node)}' repeats a body that can match "
                "the empty string")
    rules = desugar_stars(g)
    bodies: dict[str, CpsRecognizer] = {}
    refs = {name: _nonterminal(bodies, name) for name in rules}
    for name, expr in rules.items():
        body = _body(name, _compile(expr, refs), report_deliveries=not memoize)
        bodies[name] = cps_memo(body, name) if memoize else body
    return refs


def run_cps(g: Grammar, tokens, *, memoize: bool = True, fuel: int = DEFAULT_FUEL,
            trace=None, audit: bool = False) -> tuple[list[int], Session]:
    """Run the start symbol at 0; returns the delivered right positions in order."""
    engine = compile_cps_engine(g, memoize)
    s = Session(tokens, fuel=fuel, trace=trace, audit=audit)
    delivered: list[int] = []
    s.run(lambda sess: engine[g.start](sess, delivered.append, 0))
    return delivered, s


def cps_recognize(g: Grammar, tokens, memoize: bool = True, fuel: int = DEFAULT_FUEL) -> bool:
    engine = compile_cps_engine(g, memoize)
    s = Session(tokens, fuel=fuel)
    recognized = False

    def finish(r: int):
        nonlocal recognized
        if r == s.n:
            recognized = True

    s.run(lambda sess: engine[g.start](sess, finish, 0))
    return recognized

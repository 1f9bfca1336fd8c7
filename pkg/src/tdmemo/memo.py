"""Memoization for continuation-passing recognizers.

Each (nonterminal, left position) key owns a :class:`MemoEntry` with the
continuations of every caller and the right positions found so far.  The
first call registers its continuation and runs the unmemoized body; every
new result is stored and then passed to all registered callers.  Later
calls register and replay the stored results, so a body never runs twice
for the same key.  Because the entry exists from the moment of the first
call, a left-recursive re-entry just registers another continuation
instead of recursing.

Reading the table as a chart: a key is a prediction of a category at a
position, and each stored result is a complete edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .session import Session

Continuation = Callable[[int], None]
CpsRecognizer = Callable[[Session, Continuation, int], None]


class NotQuiescent(RuntimeError):
    """The chart was requested before the top-level application returned."""


@dataclass(eq=False)
class MemoEntry:
    continuations: list = field(default_factory=list)
    results: list = field(default_factory=list)
    seen: set = field(default_factory=set)
    evaluating: bool = False

    def push_continuation(self, k: Continuation):
        self.continuations.append(k)

    def push_result(self, r: int):
        self.results.append(r)
        self.seen.add(r)


def result_subsumed(entry: MemoEntry, r: int) -> bool:
    # Positions carry no partial information, so subsumption is equality.
    return r in entry.seen


def table_ref(s: Session, name: str, l: int) -> MemoEntry:
    """Fetch the entry for ``(name, l)``, creating it on first use."""
    row = s.memo.get(name)
    if row is None:
        row = s.memo[name] = [None] * (s.n + 1)
    entry = row[l]
    if entry is None:
        entry = row[l] = MemoEntry()
        s.counters.memo_keys += 1
    return entry


@dataclass(eq=False)
class Registration:
    """Audit record for one registered continuation (``Session.audit``)."""

    name: str
    left: int
    timing: str     # "first", "during" (body still running) or "after"
    received: list = field(default_factory=list)


def _audited(s: Session, name: str, l: int, entry: MemoEntry, k: Continuation) -> Continuation:
    timing = "first" if not entry.continuations else ("during" if entry.evaluating else "after")
    record = Registration(name, l, timing)
    s.registrations.append(record)

    def audited(r: int):
        record.received.append(r)
        k(r)
    return audited


def cps_memo(inner: CpsRecognizer, nonterminal: str) -> CpsRecognizer:
    """Wrap ``inner`` so it runs at most once per left position in a session."""
    def rec(s: Session, k: Continuation, l: int):
        entry = table_ref(s, nonterminal, l)
        if s.audit:
            k = _audited(s, nonterminal, l, entry, k)
        if not entry.continuations:
            entry.push_continuation(k)

            def harvest(r: int):
                if result_subsumed(entry, r):
                    return
                entry.push_result(r)
                s.emit("deliver", nonterminal, l, r)
                conts = entry.continuations
                # Continuations registered during this loop get r by replay.
                for i in range(len(conts)):
                    s.counters.deliveries += 1
                    conts[i](r)

            entry.evaluating = True
            try:
                inner(s, harvest, l)
            finally:
                entry.evaluating = False
        else:
            entry.push_continuation(k)
            results = entry.results
            for i in range(len(results)):
                s.counters.deliveries += 1
                k(results[i])
    return rec


def memo_entries(s: Session):
    """Yield ``(name, left, entry)`` for every key created in ``s``."""
    for name, row in s.memo.items():
        for l, entry in enumerate(row):
            if entry is not None:
                yield name, l, entry


def is_auxiliary(name: str) -> bool:
    return "*" in name


def export_chart(s: Session, include_auxiliary: bool = False) -> list[tuple[str, int, int]]:
    """Complete edges ``(A, l, r)`` stored in the memo table, sorted by (l, r, A).

    Entries for the helper nonterminals introduced for ``*`` are left out
    unless ``include_auxiliary`` is set.
    """
    if not s.quiescent:
        raise NotQuiescent("export_chart needs a finished session")
    edges = [(name, l, r) for name, l, entry in memo_entries(s)
             if include_auxiliary or not is_auxiliary(name) for r in entry.results]
    edges.sort(key=lambda e: (e[1], e[2], e[0]))
    return edges


def memo_keys(s: Session, include_auxiliary: bool = False) -> set[tuple[str, int]]:
    return {(name, l) for name, l, _ in memo_entries(s)
            if include_auxiliary or not is_auxiliary(name)}


def evaluation_counts(s: Session) -> dict[str, int]:
    """Number of body evaluations per nonterminal in ``s``."""
    counts: dict[str, int] = {}
    for (name, _), c in s.evaluations.items():
        counts[name] = counts.get(name, 0) + c
    return counts

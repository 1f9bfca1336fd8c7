"""Run any engine by name and collect a uniform report."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .cpsrec import run_cps
from .grammar import Grammar
from .oracle import oracle_positions
from .session import Counters, Session
from .setrec import DEFAULT_FUEL, run_set

ENGINES = ("set", "set-memo", "cps", "cps-memo", "oracle")
DEFAULT_ENGINE = "cps-memo"


@dataclass
class RunReport:
    engine: str
    n: int
    recognized: bool
    right_positions: list[int]
    counters: dict[str, int]
    elapsed: float
    session: Session | None = field(default=None, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {"engine": self.engine, "n": self.n, "recognized": self.recognized,
                "right_positions": self.right_positions, "counters": self.counters,
                "elapsed": self.elapsed}


def run_engine(g: Grammar, tokens, engine: str = DEFAULT_ENGINE, fuel: int = DEFAULT_FUEL,
               trace=None) -> RunReport:
    """Right positions of the start symbol at 0 under ``engine``.

    Raises :class:`~tdmemo.session.ResourceExhausted` or
    :class:`~tdmemo.grammar.GrammarError` as the engine does.
    """
    tokens = tuple(tokens)
    t0 = time.perf_counter()
    session = None
    if engine in ("set", "set-memo"):
        found, session = run_set(g, tokens, memoize=engine == "set-memo", fuel=fuel, trace=trace)
    elif engine in ("cps", "cps-memo"):
        delivered, session = run_cps(g, tokens, memoize=engine == "cps-memo", fuel=fuel,
                                     trace=trace)
        found = set(delivered)
    elif engine == "oracle":
        found = oracle_positions(g, tokens)
    else:
        raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    elapsed = time.perf_counter() - t0
    counters = (session.counters if session else Counters()).as_dict()
    ordered = sorted(found)
    return RunReport(engine, len(tokens), len(tokens) in found, ordered, counters, elapsed,
                     session)

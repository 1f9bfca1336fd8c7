"""Per-run state shared by every engine: input, fuel, counters, memo tables."""

from __future__ import annotations

import sys
import threading
from collections import Counter
from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence

# Recognizers recurse through Python frames, so deep runs get their own thread
# with a large stack.  MAX_DEPTH bounds the Python frame count inside it.
STACK_BYTES = 2 << 30
MAX_DEPTH = 2_000_000


class ResourceExhausted(RuntimeError):
    """A run stopped before quiescence because a budget ran out."""


class FuelExhausted(ResourceExhausted):
    def __init__(self, fuel: int):
        super().__init__(f"fuel exhausted after {fuel} recognizer applications")
        self.fuel = fuel


class DepthExhausted(ResourceExhausted):
    def __init__(self, fuel_used: int):
        super().__init__(f"call depth limit reached after {fuel_used} recognizer applications")
        self.fuel_used = fuel_used


@dataclass
class Counters:
    fuel_used: int = 0
    calls: int = 0          # nonterminal entries
    evaluations: int = 0    # nonterminal bodies actually run
    unions: int = 0         # set engine position-set unions
    deliveries: int = 0     # continuation invocations
    memo_keys: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


TraceHook = Callable[[tuple], None]


@dataclass(eq=False)
class Session:
    """One recognition run of a compiled grammar over one token string.

    ``fuel`` counts the recognizer applications still allowed; every
    combinator application calls :meth:`tick` once.  ``trace`` receives
    ``("enter", A, l)`` and ``("deliver", A, l, r)`` events when set.
    """

    tokens: Sequence[str]
    fuel: int = 10**7
    trace: TraceHook | None = None
    audit: bool = False
    counters: Counters = field(default_factory=Counters)
    evaluations: Counter = field(default_factory=Counter)
    memo: dict = field(default_factory=dict)
    registrations: list = field(default_factory=list)
    quiescent: bool = False

    def __post_init__(self):
        self.tokens = tuple(self.tokens)
        self.n = len(self.tokens)
        self.initial_fuel = self.fuel
        if self.fuel < 0:
            raise ValueError("fuel must be non-negative")

    def tick(self):
        if self.fuel == 0:
            raise FuelExhausted(self.initial_fuel)
        self.fuel -= 1
        self.counters.fuel_used += 1

    def evaluated(self, name: str, l: int):
        self.counters.evaluations += 1
        self.evaluations[name, l] += 1

    def emit(self, *event):
        if self.trace is not None:
            self.trace(event)

    def run(self, fn: Callable, *args):
        """Run ``fn(self, *args)`` to completion and mark the session quiescent."""
        try:
            result = run_deep(fn, self, *args)
        except RecursionError:
            raise DepthExhausted(self.counters.fuel_used) from None
        self.quiescent = True
        return result


def run_deep(fn: Callable, *args):
    """Call ``fn(*args)`` on a worker thread with a large stack.

    The recursion limit is raised to ``MAX_DEPTH`` while any such call is
    active.  Exceptions, including ``RecursionError``, propagate to the caller.
    """
    out: dict = {}

    def target():
        try:
            out["value"] = fn(*args)
        except BaseException as exc:  # re-raised on the calling thread
            out["error"] = exc

    global _active, _saved_limit
    with _lock:
        if _active == 0:
            _saved_limit = sys.getrecursionlimit()
            sys.setrecursionlimit(MAX_DEPTH)
        _active += 1
        previous = threading.stack_size(STACK_BYTES)
        try:
            worker = threading.Thread(target=target, name="tdmemo-run")
            worker.start()
        finally:
            threading.stack_size(previous)
    try:
        worker.join()
    finally:
        with _lock:
            _active -= 1
            if _active == 0:
                sys.setrecursionlimit(_saved_limit)
    if "error" in out:
        raise out["error"]
    return out["value"]


_lock = threading.Lock()
_active = 0
_saved_limit = sys.getrecursionlimit()

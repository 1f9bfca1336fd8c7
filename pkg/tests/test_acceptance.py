"""Acceptance criteria.  Run alone with ``pytest tests/test_acceptance.py``;
a PASS/FAIL line per criterion is printed in the terminal summary."""

import random
import time
from collections import Counter

import pytest

from tdmemo.corpus import all_inputs, corpus, random_grammar
from tdmemo.cpsrec import desugar_stars, run_cps
from tdmemo.engines import run_engine
from tdmemo.grammar import (Alt, Grammar, Opt, Ref, Seq, Star, Terminal,
                            left_recursive_nonterminals, nullable_set, walk)
from tdmemo.memo import export_chart, is_auxiliary, memo_entries
from tdmemo.oracle import oracle_derives, prediction_closure
from tdmemo.session import FuelExhausted

from conftest import SENTENCE, LEFT_SENTENCE

SEED = 1995
N_GRAMMARS = 200
MAX_LEN = 6
VOCAB = ("a", "b")
FOUR_ENGINES = ("set", "set-memo", "cps", "cps-memo")


def criterion(number, text):
    return pytest.mark.criterion(number, text)


@pytest.fixture(scope="module")
def sweep():
    """Criteria 3-5 share one sweep: every random grammar on every input."""
    rng = random.Random(SEED)
    grammars = [random_grammar(rng, VOCAB, max_nonterminals=6, max_alternatives=3)
                for _ in range(N_GRAMMARS)]
    runs = []
    for g in grammars:
        aux_rules = len(desugar_stars(g))
        for tokens in all_inputs(VOCAB, MAX_LEN):
            _, s = run_cps(g, tokens, fuel=10**7)
            facts = oracle_derives(g, tokens)
            runs.append((g, aux_rules, tokens, s, facts))
    return grammars, runs


def _kinds(g):
    nodes = [x for body in g.rules.values() for x in walk(body)]
    lr = left_recursive_nonterminals(g)
    return {
        "left-recursive": bool(lr),
        "hidden-left-recursive": bool(lr - _left_recursive_ignoring_nullable(g)),
        "opt": any(isinstance(x, Opt) for x in nodes),
        "star": any(isinstance(x, Star) for x in nodes),
        "nullable": bool(nullable_set(g)),
    }


def _left_recursive_ignoring_nullable(g):
    # left recursion visible without looking through any nullable prefix
    def first(expr):
        if isinstance(expr, Ref):
            return {expr.name}
        if isinstance(expr, Seq):
            return first(expr.items[0])
        if isinstance(expr, Alt):
            return set().union(*(first(x) for x in expr.items))
        return set()
    edges = {a: first(b) for a, b in g.rules.items()}
    out = set()
    for a in g.rules:
        seen, stack = set(), list(edges[a])
        while stack:
            b = stack.pop()
            if b == a:
                out.add(a)
                break
            if b not in seen:
                seen.add(b)
                stack.extend(edges[b])
    return out


@criterion(1, "sample sentence: start positions {4, 6} on all four engines")
def test_example_13_all_engines():
    g = corpus()["english"]
    for engine in FOUR_ENGINES:
        report = run_engine(g, SENTENCE, engine, fuel=10**7)
        assert report.right_positions == [4, 6], engine
        suffixes = [SENTENCE[r:] for r in report.right_positions]
        assert suffixes == [("likes", "sandy"), ()]


@criterion(2, "left-recursive sentence: cps-memo true; set engines exhaust fuel 1e3..1e6")
def test_example_36_left_recursion():
    g = corpus()["np-left"]
    assert run_engine(g, LEFT_SENTENCE, "cps-memo").recognized
    for engine in ("set", "set-memo"):
        for fuel in (10**3, 10**4, 10**5, 10**6):
            with pytest.raises(FuelExhausted):
                run_engine(g, LEFT_SENTENCE, engine, fuel=fuel)


@criterion(3, "oracle equivalence of cps-memo stored results, 200 random grammars")
def test_oracle_equivalence(sweep):
    grammars, runs = sweep
    assert len(grammars) >= 200
    kinds = Counter(k for g in grammars for k, present in _kinds(g).items() if present)
    for kind in ("left-recursive", "hidden-left-recursive", "opt", "star"):
        assert kinds[kind] > 0, kind
    assert all(len(g.rules) <= 6 for g in grammars)
    assert all(len(b.items) <= 3 for g in grammars for b in g.rules.values()
               if isinstance(b, Alt))
    mismatches = 0
    for g, _, tokens, s, facts in runs:
        for name, l, entry in memo_entries(s):
            if is_auxiliary(name):
                continue
            expected = {r for a, ll, r in facts if a == name and ll == l}
            mismatches += set(entry.results) != expected
    assert mismatches == 0
    print(f"{len(runs)} runs, grammar features: {dict(kinds)}")


@criterion(4, "single evaluation per key and key count <= |N|(n+1)")
def test_single_evaluation_bound(sweep):
    _, runs = sweep
    violations = 0
    for g, aux_rules, tokens, s, _ in runs:
        n = len(tokens)
        violations += any(c > 1 for c in s.evaluations.values())
        keys = list(memo_entries(s))
        user_keys = [k for k in keys if not is_auxiliary(k[0])]
        violations += len(user_keys) > len(g.rules) * (n + 1)
        violations += len(keys) > aux_rules * (n + 1)
    assert violations == 0


@criterion(5, "chart export equals oracle spans at predicted keys")
def test_chart_correspondence(sweep):
    _, runs = sweep
    mismatches = 0
    for g, _, tokens, s, facts in runs:
        keys = prediction_closure(g, tokens, facts)
        user_keys = {(a, l) for a, l, _ in memo_entries(s) if not is_auxiliary(a)}
        expected = {f for f in facts if (f[0], f[1]) in keys}
        mismatches += set(export_chart(s)) != expected or user_keys != keys
    assert mismatches == 0


@criterion(6, "delivery completeness over >= 1e5 audited deliveries")
def test_delivery_completeness():
    rng = random.Random(SEED + 6)
    total = 0
    violations = 0
    timings = Counter()
    cases = [(corpus()["ambiguous"], ("a",) * n) for n in (8, 12, 16, 20)]
    cases += [(corpus()["hidden-left"], tuple("zyzxzx")), (corpus()["np-left"], LEFT_SENTENCE)]

    def draws():
        yield from cases
        while True:
            g = random_grammar(rng, VOCAB)
            yield g, tuple(rng.choice(VOCAB) for _ in range(rng.randint(0, 10)))

    for n_case, (g, tokens) in enumerate(draws()):
        if total >= 10**5 and n_case >= len(cases):
            break
        _, s = run_cps(g, tokens, audit=True)
        for reg in s.registrations:
            timings[reg.timing] += 1
            total += len(reg.received)
            results = s.memo[reg.name][reg.left].results
            counts = Counter(reg.received)
            violations += set(counts) != set(results) or any(c != 1 for c in counts.values())
    print(f"{total} deliveries, registrations by timing: {dict(timings)}")
    assert set(timings) == {"first", "during", "after"}
    assert total >= 10**5
    assert violations == 0


@criterion(7, "S -> S S | a: cps-memo fuel(2n)/fuel(n) <= 16, under 5 s")
def test_polynomial_growth():
    g = corpus()["ambiguous"]
    t0 = time.perf_counter()
    fuel = {}
    for n in (4, 8, 16, 32):
        report = run_engine(g, ("a",) * n, "cps-memo")
        assert report.recognized
        fuel[n] = report.counters["fuel_used"]
    elapsed = time.perf_counter() - t0
    ratios = [fuel[2 * n] / fuel[n] for n in (4, 8, 16)]
    print(f"fuel used {fuel}, ratios {ratios}, {elapsed:.2f}s")
    assert all(r <= 16 for r in ratios)
    assert elapsed < 5


def _interchangeable_classes(g: Grammar):
    """Group terminals whose exchange leaves the grammar unchanged up to Alt order."""
    def canon(expr, swap):
        if isinstance(expr, Terminal):
            return ("t", swap.get(expr.word, expr.word))
        if isinstance(expr, Alt):
            return ("alt", tuple(sorted((canon(x, swap) for x in expr.items), key=repr)))
        if isinstance(expr, Seq):
            return ("seq", tuple(canon(x, swap) for x in expr.items))
        if isinstance(expr, (Opt, Star)):
            return (type(expr).__name__, canon(expr.item, swap))
        return (type(expr).__name__, getattr(expr, "name", None))

    def canon_grammar(swap):
        return {a: canon(b, swap) for a, b in g.rules.items()}

    base = canon_grammar({})
    reps = []
    for word in sorted(g.terminals):
        if not any(canon_grammar({word: r, r: word}) == base for r in reps):
            reps.append(word)
    return reps


@criterion(8, "all four engines agree with the oracle on non-left-recursive corpus grammars")
def test_engine_agreement():
    rng = random.Random(SEED + 8)
    named = [g for g in corpus().values() if not left_recursive_nonterminals(g)]
    assert len(named) >= 3
    cases = [(g, _interchangeable_classes(g)) for g in named]
    cases += [(random_grammar(rng, VOCAB, left_recursion=False), list(VOCAB)) for _ in range(20)]
    mismatches = 0
    checked = 0
    for g, vocab in cases:
        for tokens in all_inputs(vocab, MAX_LEN):
            truth = any(a == g.start and l == 0 and r == len(tokens)
                        for a, l, r in oracle_derives(g, tokens))
            for engine in FOUR_ENGINES:
                mismatches += run_engine(g, tokens, engine).recognized != truth
                checked += 1
    print(f"{checked} engine runs compared")
    assert mismatches == 0

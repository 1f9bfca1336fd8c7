import itertools
from pathlib import Path

import pytest

from tdmemo.corpus import corpus
from tdmemo.grammar import Alt, Eps, Opt, Ref, Seq, Terminal, tokenize

ROOT = Path(__file__).resolve().parents[1]
GRAMMARS = ROOT / "grammars"

SENTENCE = tokenize("Kim knows every student likes Sandy")
LEFT_SENTENCE = tokenize("Kim professor knows every student")


@pytest.fixture(scope="session")
def grammars():
    return corpus()


@pytest.fixture
def fig1(grammars):
    return grammars["english"]


@pytest.fixture
def np35(grammars):
    return grammars["np-left"]


def language(g, max_len):
    """Strings of length <= max_len derived by each nonterminal.

    Fixpoint over sets of token tuples; shares nothing with tdmemo.oracle.
    """
    lang = {name: set() for name in g.rules}

    def strings(expr):
        if isinstance(expr, Terminal):
            return {(expr.word,)}
        if isinstance(expr, Eps):
            return {()}
        if isinstance(expr, Ref):
            return lang[expr.name]
        if isinstance(expr, Alt):
            return set().union(*(strings(x) for x in expr.items))
        if isinstance(expr, Opt):
            return {()} | strings(expr.item)
        if isinstance(expr, Seq):
            out = {()}
            for item in expr.items:
                part = strings(item)
                out = {x + y for x in out for y in part if len(x) + len(y) <= max_len}
            return out
        body = strings(expr.item)
        out = {()}
        while True:
            more = out | {x + y for x in out for y in body if len(x) + len(y) <= max_len}
            if more == out:
                return out
            out = more

    changed = True
    while changed:
        changed = False
        for name, body in g.rules.items():
            new = strings(body)
            if not new <= lang[name]:
                lang[name] |= new
                changed = True
    return lang


def spans_by_enumeration(g, tokens):
    tokens = tuple(tokens)
    lang = language(g, len(tokens))
    return {(name, l, r) for name in g.rules
            for l, r in itertools.combinations_with_replacement(range(len(tokens) + 1), 2)
            if tokens[l:r] in lang[name]}


# --- acceptance reporting -------------------------------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, outcome in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}")

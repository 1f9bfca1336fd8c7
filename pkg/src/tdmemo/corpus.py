"""Named test grammars and a random grammar generator."""

from __future__ import annotations

import itertools
import random

from .grammar import (Alt, Eps, Grammar, Opt, Ref, Seq, Star, Terminal, left_recursive_nonterminals,
                      parse_grammar_text, star_over_nullable)

ENGLISH = """\
# A small English fragment.
S   -> NP VP ;
VP  -> V NP | V S ;
NP  -> PN | Det N ;
PN  -> "Kim" | "Sandy" ;
V   -> "likes" | "knows" ;
Det -> "every" | "no" ;
N   -> "student" | "professor" ;
"""

# ENGLISH with a left-recursive NP ("Kim professor" ~ "Kim's professor").
NP_LEFT = ENGLISH.replace("NP  -> PN | Det N ;", "NP  -> PN | NP N | Det N ;")

AMBIGUOUS = 'S -> S S | "a" ;\n'
RIGHT_BRANCHING = 'S -> "a" S | eps ;\n'

# B is nullable, so A calls itself at its own left edge through B.
HIDDEN_LEFT = """\
A -> B A "x" | "y" ;
B -> eps | "z" ;
"""

EXTENDED = """\
S -> NP VP ;
NP -> Det? Adj* N ( PP )* ;
PP -> P NP ;
VP -> V NP? ;
Det -> "the" ; Adj -> "old" | "big" ; N -> "man" | "dog" ;
P -> "with" ; V -> "saw" | "slept" ;
"""


def corpus() -> dict[str, Grammar]:
    return {
        "english": parse_grammar_text(ENGLISH),
        "np-left": parse_grammar_text(NP_LEFT),
        "ambiguous": parse_grammar_text(AMBIGUOUS),
        "right-branching": parse_grammar_text(RIGHT_BRANCHING),
        "hidden-left": parse_grammar_text(HIDDEN_LEFT),
        "extended": parse_grammar_text(EXTENDED),
    }


def all_inputs(vocabulary, max_length: int):
    """Every token string over ``vocabulary`` of length 0..max_length."""
    for n in range(max_length + 1):
        yield from itertools.product(vocabulary, repeat=n)


def random_grammar(rng: random.Random, vocabulary=("a", "b"), max_nonterminals: int = 6,
                   max_alternatives: int = 3, max_items: int = 3,
                   left_recursion: bool = True) -> Grammar:
    """A random grammar whose rules may be left recursive, nullable or starred.

    Roughly one rule in four is forced to start with a call to itself or to
    an earlier rule, often behind a nullable prefix, so direct, indirect and
    hidden left recursion all show up regularly.  With ``left_recursion``
    off, grammars are redrawn until every engine accepts them (no left
    recursion, no ``*`` over a nullable body).
    """
    if not left_recursion:
        while True:
            g = random_grammar(rng, vocabulary, max_nonterminals, max_alternatives, max_items)
            if not left_recursive_nonterminals(g) and not star_over_nullable(g):
                return g

    count = rng.randint(1, max_nonterminals)
    names = [f"N{i}" for i in range(count)]

    def atom(depth: int):
        roll = rng.random()
        if roll < 0.4:
            return Terminal(rng.choice(vocabulary))
        if roll < 0.8 or depth > 1:
            return Ref(rng.choice(names))
        if roll < 0.87:
            return Opt(atom(depth + 1))
        if roll < 0.94:
            return Star(atom(depth + 1))
        return Eps()

    def sequence(depth: int = 0):
        items = [atom(depth) for _ in range(rng.randint(1, max_items))]
        return items[0] if len(items) == 1 else Seq(tuple(items))

    rules = {}
    for i, name in enumerate(names):
        alts = [sequence() for _ in range(rng.randint(1, max_alternatives))]
        if rng.random() < 0.25:
            target = Ref(rng.choice(names[:i + 1]))
            prefix = rng.choice([None, Eps(), Opt(Terminal(rng.choice(vocabulary))),
                                 Star(Terminal(rng.choice(vocabulary)))])
            items = ([prefix] if prefix is not None else []) + [target, Terminal(rng.choice(vocabulary))]
            alts[0] = Seq(tuple(items))
        rules[name] = alts[0] if len(alts) == 1 else Alt(tuple(alts))
    return Grammar(rules, names[0])

import pytest
from hypothesis import given, settings, strategies as st

from tdmemo.grammar import (Alt, Eps, Grammar, GrammarError, Opt, Ref, Seq, Star, Terminal,
                            format_grammar, left_recursive_nonterminals, load_grammar,
                            nullable_set, parse_grammar_text, tokenize)
from tdmemo.corpus import ENGLISH
from tdmemo.oracle import oracle_derives

from conftest import GRAMMARS

FIG1_ONE_LINE = ('S -> NP VP ; VP -> V NP | V S ; NP -> PN | Det N ; PN -> "Kim" | "Sandy" ; '
                 'V -> "likes" | "knows" ; Det -> "every" | "no" ; '
                 'N -> "student" | "professor" ;')


def test_english_fixture():
    g = parse_grammar_text(FIG1_ONE_LINE)
    assert g.start == "S"
    assert len(g.nonterminals) == 7
    assert g.rules["VP"] == Alt((Seq((Ref("V"), Ref("NP"))), Seq((Ref("V"), Ref("S")))))
    assert g.rules["PN"] == Alt((Terminal("kim"), Terminal("sandy")))
    assert load_grammar(GRAMMARS / "fig1.cfg") == g
    assert parse_grammar_text(ENGLISH) == g


def test_smallest_grammar():
    g = parse_grammar_text("S -> eps ;")
    assert dict(g.rules) == {"S": Eps()}


def test_dangling_reference():
    with pytest.raises(GrammarError, match="NP"):
        parse_grammar_text("S -> NP ;")


def test_syntax_error_reports_position():
    with pytest.raises(GrammarError) as info:
        parse_grammar_text('S -> "a"\n   | ) ;')
    assert info.value.line == 2 and info.value.column == 6


@pytest.mark.parametrize("text", [
    'S -> "a" ; S -> "b" ;',   # duplicate without continuation
    'S -> ;',                  # empty alternative
    'S -> "a"',                # missing ;
    'S -> "a b" ;',            # terminals are single words
    'S -> "" ;',
    'eps -> "a" ;',
    '',
    'S -> "a" ; T -> | "b" ;',  # continuation of an unknown rule
])
def test_rejects(text):
    with pytest.raises(GrammarError):
        parse_grammar_text(text)


def test_multiline_alternatives_and_continuation():
    g = parse_grammar_text('S -> "a"\n   | "b" # comment\n   ;\nS -> | "c" ;')
    assert g.rules["S"] == Alt((Terminal("a"), Terminal("b"), Terminal("c")))


def test_postfix_and_groups():
    g = parse_grammar_text('S -> ( "a" | B )* B? eps ; B -> "b" ;')
    assert g.rules["S"] == Seq((Star(Alt((Terminal("a"), Ref("B")))), Opt(Ref("B")), Eps()))


def test_start_override():
    g = parse_grammar_text(ENGLISH, start="NP")
    assert g.start == "NP"
    with pytest.raises(GrammarError):
        parse_grammar_text(ENGLISH, start="Nope")


def test_tokenize_folds_case():
    assert tokenize("Kim  knows\tSandy") == ("kim", "knows", "sandy")


# --- nullable / left recursion ---------------------------------------------

def test_nullable_examples(fig1):
    assert nullable_set(fig1) == frozenset()
    assert nullable_set(Grammar({"S": Eps()}, "S")) == {"S"}
    g = Grammar({"S": Seq((Opt(Terminal("a")), Star(Terminal("b"))))}, "S")
    assert nullable_set(g) == {"S"}
    # cross-check against the derivation oracle on the empty string
    assert ("S", 0, 0) in oracle_derives(g, ())


def test_left_recursion_examples(fig1, np35):
    assert left_recursive_nonterminals(fig1) == frozenset()
    assert left_recursive_nonterminals(np35) == {"NP"}
    hidden = Grammar({"A": Seq((Ref("B"), Terminal("x"))), "B": Alt((Eps(), Ref("A")))}, "A")
    # A calls B first; B's second branch calls A with nothing consumed
    assert left_recursive_nonterminals(hidden) == {"A", "B"}


def test_hidden_left_recursion_through_nullable_prefix(grammars):
    assert left_recursive_nonterminals(grammars["hidden-left"]) == {"A"}
    assert left_recursive_nonterminals(grammars["ambiguous"]) == {"S"}
    assert left_recursive_nonterminals(grammars["right-branching"]) == frozenset()


def test_nullable_agrees_with_oracle_on_corpus(grammars):
    for g in grammars.values():
        facts = oracle_derives(g, ())
        assert nullable_set(g) == {a for a, l, r in facts}


# --- round trip -----------------------------------------------------------

NAMES = ["S", "A", "B"]
atoms = st.one_of(
    st.sampled_from(["a", "b", "kim"]).map(Terminal),
    st.sampled_from(NAMES).map(Ref),
    st.just(Eps()),
)
exprs = st.recursive(atoms, lambda inner: st.one_of(
    st.lists(inner, min_size=2, max_size=3).map(lambda xs: Seq(tuple(xs))),
    st.lists(inner, min_size=2, max_size=3).map(lambda xs: Alt(tuple(xs))),
    inner.map(Opt),
    inner.map(Star),
), max_leaves=8)
grammars_st = st.builds(lambda bodies: Grammar(dict(zip(NAMES, bodies)), "S"),
                        st.lists(exprs, min_size=3, max_size=3))


@settings(max_examples=300, deadline=None)
@given(grammars_st)
def test_format_parse_round_trip(g):
    assert parse_grammar_text(format_grammar(g)) == g


@settings(max_examples=100, deadline=None)
@given(grammars_st, st.sampled_from(NAMES), exprs)
def test_left_recursion_monotone_under_added_alternative(g, name, extra):
    rules = dict(g.rules)
    rules[name] = Alt((rules[name], extra))
    bigger = Grammar(rules, g.start)
    assert left_recursive_nonterminals(g) <= left_recursive_nonterminals(bigger)

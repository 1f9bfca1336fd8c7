"""Top-down recognizers: set-valued, memoized, continuation-passing, and
continuation-storing memoized combinators, with a brute-force oracle."""

from .cpsrec import (LeftRecursionError, compile_cps_engine, cps_alt, cps_epsilon, cps_opt,
                     cps_recognize, cps_seq, cps_star, cps_terminal, run_cps)
from .engines import ENGINES, RunReport, run_engine
from .grammar import (Alt, Eps, Grammar, GrammarError, Opt, Ref, Seq, Star, Terminal,
                      format_grammar, left_recursive_nonterminals, load_grammar, nullable_set,
                      parse_grammar_text, tokenize)
from .memo import MemoEntry, cps_memo, evaluation_counts, export_chart, result_subsumed
from .oracle import oracle_derives, prediction_closure
from .session import DepthExhausted, FuelExhausted, ResourceExhausted, Session
from .setrec import (NullableStarError, compile_set_engine, memoize_set, run_set, set_alt,
                     set_epsilon, set_opt, set_recognize, set_seq, set_star, set_terminal)

__version__ = "0.1.0"

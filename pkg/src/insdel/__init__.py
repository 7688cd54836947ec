"""A workbench for conditional insertion-deletion systems.

Build systems and conditional grammars, compile grammars into insertion-deletion
systems, enumerate bounded languages and replay or pump derivation traces.
"""

from .construct import (BEGIN, END, CollisionError, build_rc200, build_sc22, cf_approximation,
                        compile_rc200, compile_sc22, decode_word, encode_word, hat, bar,
                        normalization_condition)
from .core import (DEL, INS, ConditionedRule, ContextRule, Degree, InsDelSystem,
                   MalformedInput, SizeVector, conditions_hold, degree_of, dele, ins,
                   is_random_context, is_subword, show, size_of, step)
from .engine import (EnumerationResult, Membership, ReplayError, SearchBounds, Trace,
                     enumerate_language, find_trace, membership, pump_insertion,
                     reachable_forms, replay, replay_forms)
from .formats import (ParseError, parse_grammar, parse_system, parse_trace, render_grammar,
                      render_system, render_trace)
from .grammar import (Grammar, GrammarError, GrammarRule, SgnfReport, derive_grammar,
                      eliminate_lambda, normalize_rc_rhs, validate_sgnf)
from .verify import (AlphabetMorphism, ComparisonReport, check_golden_traces,
                     compare_languages, golden_suite, pump_falsification)

__all__ = [name for name in dir() if not name.startswith("_")]

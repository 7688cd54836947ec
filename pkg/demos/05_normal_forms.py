"""Grammar plumbing: right-hand-side normalization, λ-elimination, and the
context-free grammar of a system with free one-symbol insertions."""

from insdel import (Grammar, GrammarRule, InsDelSystem, SearchBounds, cf_approximation,
                    derive_grammar, eliminate_lambda, enumerate_language, ins, normalize_rc_rhs,
                    render_grammar, show)

cap = SearchBounds(max_terminal_len=4)

g = Grammar("aSa", "rc", {"S"}, {"a"}, "S",
            [GrammarRule("r1", ["S"], ["a", "S", "a"]), GrammarRule("r2", ["S"], [])])
n = normalize_rc_rhs(g)
print(render_grammar(n))
print("before:", sorted(map(show, derive_grammar(g, cap).terminals)))
print("after: ", sorted(map(show, derive_grammar(n, SearchBounds(4, 13)).terminals)))
print()

cf = Grammar("SaS", "cf", {"S"}, {"a"}, "S",
             [GrammarRule("r1", ["S"], ["S", "a", "S"]), GrammarRule("r2", ["S"], [])])
print(render_grammar(eliminate_lambda(cf)))

system = InsDelSystem("ab", {"a", "b"}, {"a", "b"}, [("a", "b")],
                      [ins("ia", ["a"]), ins("ib", ["b"])])
approx = cf_approximation(system)
print(render_grammar(approx))
small = SearchBounds(max_terminal_len=3)
print("system: ", sorted(map(show, enumerate_language(system, small).terminals)))
print("grammar:", sorted(map(show, derive_grammar(approx, small).terminals)))

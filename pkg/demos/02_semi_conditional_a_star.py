"""Watch the semi-conditional compiler simulate S -> aS | λ.

Every grammar symbol X is coded as a hatted/barred pair between two
terminators, and every rule carries the normalization condition as forbidding
context: forms that stop looking like B (x^ y-)+ E freeze.  Here we find the
shortest derivation of "aa", replay it and check that every intermediate form
keeps the coding intact until the cleanup rules remove the frame.
"""

from insdel import (AlphabetMorphism, Grammar, GrammarRule, SearchBounds, build_sc22,
                    compare_languages, find_trace, is_subword, replay_forms, show)

g2 = Grammar("G2", "rc", {"S"}, {"a"}, "S",
             [GrammarRule("r1", ["S"], ["a", "S"]), GrammarRule("r2", ["S"], [])])
system, art = build_sc22(g2)
print(f"{len(system.rules)} rules, axiom {show(system.axioms[0])}")

bounds = SearchBounds(max_terminal_len=2, max_form_len=12, max_steps=41)
trace = find_trace(system, ("hat_a", "hat_a"), bounds)
forms = replay_forms(system, trace)
print(f"shortest derivation of [hat_a hat_a]: {len(trace.steps)} steps")
for (rule, pos), form in zip(trace.steps, forms[1:]):
    framed = form and form[0] == art.begin and form[-1] == art.end
    clean = not any(is_subword(x, form) for x in art.q_n)
    note = "" if not framed else ("" if clean else "  breaks the coding!")
    print(f"  {rule:>8} @ {pos:<2} {show(form)}{note}")
print()

# A search cut at exactly 40 steps cannot rule out longer derivations, so the
# comparison stays inconclusive there; one more level lets it finish.
for depth in (40, 41):
    b = SearchBounds(max_terminal_len=2, max_form_len=12, max_steps=depth)
    report = compare_languages(system, g2, AlphabetMorphism.unhat(system.terminals), b)
    print(f"max_steps={depth}: verdict {report.verdict} "
          f"({report.system_states} states explored)")

"""Compile a tiny grammar into a random context insertion-deletion system.

The grammar G1 derives exactly one word:

    S => A X => A Z a => A S' B a => A B a => a

The compiler turns each rule into a handful of insertion and deletion rules
whose permitting and forbidding conditions are single symbols.  We then
enumerate both languages up to length 3 and compare them.
"""

from insdel import (AlphabetMorphism, Grammar, GrammarRule, SearchBounds, compare_languages,
                    compile_rc200, degree_of, render_system, size_of, validate_sgnf)

g1 = Grammar(
    "G1", "sgnf",
    nonterminals={"S", "X", "Z", "S'", "A", "B", "C", "D"},
    terminals={"a"},
    start="S",
    rules=[
        GrammarRule("r1", ["S"], ["A", "X"]),
        GrammarRule("r2", ["X"], ["Z", "a"]),
        GrammarRule("r3", ["Z"], ["S'", "B"]),
        GrammarRule("r4", ["S'"], []),
        GrammarRule("r5", ["A", "B"], []),
    ],
    nprime={"S", "X", "Z", "S'"}, ndouble={"A", "B", "C", "D"}, sprime="S'",
)

print("normal form check:", "valid" if validate_sgnf(g1).valid else "invalid")

system = compile_rc200(g1)
print(f"compiled {len(g1.rules)} grammar rules into {len(system.rules)} system rules")
print(f"size {size_of(system)}, degree {degree_of(system)}")
print()
print("the first few emitted rules:")
for line in render_system(system).splitlines():
    if line.startswith("@rule") and line.split()[1].startswith(("r1", "r2")):
        print("  " + line)
print()

bounds = SearchBounds(max_terminal_len=3, max_form_len=12, max_steps=48)
report = compare_languages(system, g1, AlphabetMorphism.identity(), bounds)
print(report.text())

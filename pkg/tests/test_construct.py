import itertools
import re

import pytest

from insdel import (CollisionError, GrammarError, InsDelSystem, MalformedInput, SearchBounds,
                    Trace, bar, build_rc200, cf_approximation, compile_rc200, compile_sc22,
                    decode_word, degree_of, derive_grammar, encode_word, enumerate_language,
                    hat, ins, is_subword, normalization_condition, replay, size_of)
from insdel.construct import BEGIN as B, END as E

from conftest import rc, sgnf


def test_normalization_condition_for_one_symbol():
    a, abar = hat("a"), bar("a")
    assert normalization_condition(["a"]) == {
        (a, a), (abar, abar), (B, abar), (a, E), (a, B), (abar, B), (E, a), (E, abar)}


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_normalization_condition_size(n):
    V = [f"s{i}" for i in range(n)]
    assert len(normalization_condition(V)) == 2 * n * n + 6 * n


def test_coded_word_avoids_the_condition():
    QN = normalization_condition(["a"])
    assert not any(is_subword(x, (B, hat("a"), bar("a"), E)) for x in QN)
    assert (E, hat("a")) in QN


def test_condition_characterizes_framed_codes():
    """Among strings B w E with w over hats and bars, freeness means w is hat-bar pairs."""
    V = ["S", "a", "b"]
    QN = normalization_condition(V)
    inner = [hat(x) for x in V] + [bar(x) for x in V]
    letter = {**{hat(x): "h" for x in V}, **{bar(x): "b" for x in V}}
    checked = 0
    for n in range(0, 5):
        for mid in itertools.product(inner, repeat=n):
            w = (B, *mid, E)
            free = not any(is_subword(x, w) for x in QN)
            shaped = re.fullmatch("(hb)*", "".join(letter[s] for s in mid)) is not None
            assert free == shaped, w
            checked += 1
    assert checked == 1555  # every framed string of length <= 6


@pytest.mark.parametrize("w, coded", [
    ((), (B, E)),
    (("S",), (B, hat("S"), bar("S"), E)),
    (("a", "b"), (B, hat("a"), bar("a"), hat("b"), bar("b"), E)),
])
def test_encode_word(w, coded):
    assert encode_word(w) == coded


def test_decode_word():
    assert decode_word(()) == ()
    assert decode_word((hat("a"), hat("b"))) == ("a", "b")
    with pytest.raises(MalformedInput):
        decode_word((bar("a"),))


def test_cleanup_output_decodes_to_the_word():
    s = compile_sc22(rc("lam", [("p", ["S"], [])], {"S"}, {"a"}))
    cleanup = tuple(r for r in s.rules if r.id.startswith("clean."))
    t = InsDelSystem("cleanup", s.alphabet, s.terminals, ((B, hat("a"), bar("a"), E),), cleanup)
    (w,) = enumerate_language(t, SearchBounds(max_terminal_len=2)).terminals
    assert decode_word(w) == ("a",)


def test_sc22_erasing_grammar_has_seven_rules():
    s = compile_sc22(rc("lam", [("p", ["S"], [])], {"S"}, {"a"}))
    assert [r.id for r in s.rules] == ["p.1", "p.2", "p.3", "p.4",
                                       "clean.B", "clean.E", "clean.bar_a"]
    assert s.axioms == ((B, hat("S"), bar("S"), E),)
    assert s.terminals == {hat("a")}


def test_sc22_p_group_replays_on_the_axiom():
    s = compile_sc22(rc("lam", [("p", ["S"], [])], {"S"}, {"a"}))
    t = Trace(s.name, s.axioms[0], [("p.1", 1), ("p.2", 2), ("p.3", 2), ("p.4", 1)])
    assert replay(s, t) == (B, E)
    t2 = Trace(s.name, s.axioms[0], t.steps + (("clean.B", 0), ("clean.E", 0)))
    assert replay(s, t2) == ()


def test_sc22_size_and_degree(g2):
    s = compile_sc22(g2)
    assert size_of(s) == (1, 0, 0, 1, 0, 0)
    assert degree_of(s) == (2, 2)


def test_sc22_maps_conditions_to_hats():
    g = rc("cond", [("r1", ["S"], ["X", "S"], [], [("X",)]), ("r2", ["X"], ["a"], [("S",)]),
                    ("r3", ["S"], [])], {"S", "X"}, {"a"})
    s = compile_sc22(g)
    assert (hat("X"),) in s.rule("r1.1").forbid
    assert (hat("S"),) in s.rule("r2.1").permit


def test_sc22_needs_random_context(g1):
    with pytest.raises(GrammarError):
        compile_sc22(g1)


def test_sc22_refuses_symbol_collisions():
    g = rc("clash", [("p", ["S"], [])], {"S"}, {"hat_S"})
    with pytest.raises(CollisionError):
        compile_sc22(g)


def test_rc200_p_and_r_give_twenty_rules():
    g = sgnf("pr", [("p", ["X"], ["a", "Y"]), ("r", ["A", "B"], [])], {"S", "X", "Y"}, {"a"})
    s = compile_rc200(g)
    assert len(s.rules) == 20
    assert [r.id for r in s.rules[:2]] == ["p.1", "p.2"]
    assert [r.id for r in s.rules[2:]] == [f"r.{i}" for i in range(1, 19)]


def test_rc200_p_group_trace():
    g = sgnf("p", [("p", ["X"], ["a", "Y"])], {"S", "X", "Y"}, {"a"})
    s = compile_rc200(g)
    t = Trace(s.name, ("X",), [("p.1", 0)])
    assert replay(s, t, allow_any_start=True) == ("a", "Y", "X")
    t = Trace(s.name, ("X",), [("p.1", 0), ("p.2", 2)])
    assert replay(s, t, allow_any_start=True) == ("a", "Y")


def test_rc200_size_and_degree(g1):
    s = compile_rc200(g1)
    assert size_of(s) == (2, 0, 0, 1, 1, 0)
    assert degree_of(s) == (1, 1)
    assert len(s.rules) == 38
    assert s.axioms == (("S",),)


def test_rc200_rule_counts_per_shape():
    g = sgnf("shapes", [("lt", ["S"], ["a", "X"]), ("ln", ["X"], ["A", "Y"]),
                        ("rt", ["Y"], ["Z", "a"]), ("rn", ["Z"], ["S'", "B"]),
                        ("sp", ["S'"], []), ("e", ["C", "D"], [])],
             {"S", "X", "Y", "Z", "S'"}, {"a"}, sprime="S'")
    _, art = build_rc200(g)
    s = compile_rc200(g)
    prefix = lambda rid: [r for r in s.rules if r.id.split(".")[0].rstrip("'") == rid]
    assert {rid: len(prefix(rid)) for rid in ["lt", "ln", "rt", "rn", "sp", "e"]} == \
        {"lt": 2, "ln": 4, "rt": 5, "rn": 10, "sp": 1, "e": 18}
    assert set(art.splits) == {"ln", "rn"}


def test_rc200_rejects_non_sgnf(g2):
    with pytest.raises(GrammarError):
        compile_rc200(g2)
    bad = sgnf("bad", [("x", ["X"], ["B", "X"])], {"S", "X"}, set())
    with pytest.raises(GrammarError, match="Geffert"):
        compile_rc200(bad)


def test_cf_approximation_rules_before_elimination():
    s = InsDelSystem("one", {"a"}, {"a"}, (("a",),), (ins("i", ["a"]),))
    g = cf_approximation(s, eliminate=False)
    S, S0 = "S", "S0"
    assert {(r.lhs, r.rhs) for r in g.rules} == {
        ((S0,), (S, "a", S)), ((S,), (S, "a", S)), ((S,), ())}
    assert g.start == S0


def test_cf_approximation_without_insertions(ab_system):
    g = cf_approximation(ab_system)
    assert derive_grammar(g, SearchBounds(max_terminal_len=2)).terminals == {("a", "b")}


def test_cf_approximation_matches_subsequence_language():
    s = InsDelSystem("ab", {"a", "b"}, {"a", "b"}, (("a", "b"),), (ins("ia", ["a"]),
                                                                     ins("ib", ["b"])))
    bounds = SearchBounds(max_terminal_len=3)
    want = {w for n in (2, 3) for w in itertools.product("ab", repeat=n)
            if re.search("a.*b", "".join(w))}
    assert derive_grammar(cf_approximation(s), bounds).terminals == want
    assert enumerate_language(s, bounds).terminals == want


def test_cf_approximation_notes_dropped_conditions():
    s = InsDelSystem("c", {"a"}, {"a"}, (("a",),), (ins("i", ["a"], forbid=[("a", "a")]),))
    assert any("over-approximates" in n for n in cf_approximation(s).notes)


def test_cf_approximation_rejects_contexts():
    s = InsDelSystem("c", {"a"}, {"a"}, (("a",),), (ins("i", ["a"], left=["a"]),))
    with pytest.raises(MalformedInput):
        cf_approximation(s)

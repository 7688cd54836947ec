import textwrap

import pytest

from insdel import (InsDelSystem, ParseError, Trace, compile_rc200, compile_sc22, degree_of,
                    dele, ins, parse_grammar, parse_system, parse_trace, render_grammar,
                    render_system, render_trace, size_of)
from insdel.cli import main
from insdel.formats import file_kind
from insdel.verify import gamma_ab, gamma_ab_trace, golden_suite

G1_TEXT = """\
@grammar G1 kind=sgnf
@nprime S X Z S'
@ndouble A B C D
@terminals a
@start S
@sprime S'
@rule r1 [S] -> [A X]
@rule r2 [X] -> [Z a]
@rule r3 [Z] -> [S' B]
@rule r4 [S'] -> []
@rule r5 [A] [B] -> []
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return str(p)


def test_minimal_system_file():
    s = parse_system("@system t\n@alphabet a\n@terminals a\n@axiom [a]\n")
    assert s == InsDelSystem("t", {"a"}, {"a"}, (("a",),), ())


def test_deletion_rule_line():
    s = parse_system("@system t\n@alphabet X Y\n@terminals\n@axiom [X]\n"
                     "@rule p2 del ([Y])([X])([]) permit {} forbid {}\n")
    assert s.rules == (dele("p2", ["X"], left=["Y"]),)


def test_unknown_symbol_is_reported_with_its_line():
    text = "@system t\n@alphabet a\n@terminals a\n@axiom [a]\n@rule r ins ([])([b])([])\n"
    with pytest.raises(ParseError, match="unknown symbol b at line 5"):
        parse_system(text)


@pytest.mark.parametrize("rule, message", [
    ("@rule r ins ([])([])([])", "empty"),
    ("@rule r ins ([])([a])([])\n@rule r del ([])([a])([])", "duplicate rule id r at line 6"),
    ("@rule r swap ([])([a])([])", "mode"),
    ("@rule r ins ([])([a])([]) maybe {}", "permit"),
    ("@rule r ins ([])([a)([])", "inside a string"),
])
def test_system_parse_errors(rule, message):
    with pytest.raises(ParseError, match=message):
        parse_system("@system t\n@alphabet a\n@terminals a\n@axiom [a]\n" + rule + "\n")


def test_comments_and_conditions():
    s = parse_system("""
        # a comment line
        @system t   # trailing comment
        @alphabet a b
        @terminals a
        @axiom [a]
        @rule r ins ([a])([b])([]) permit {[a] [a b]} forbid {[b b]}
    """)
    assert s.rules[0].permit == {("a",), ("a", "b")}
    assert s.rules[0].forbid == {("b", "b")}


def test_empty_grammar_file():
    g = parse_grammar("@grammar g kind=cf\n@nonterminals S\n@terminals\n@start S\n")
    assert g.rules == ()


def test_sgnf_erasing_rule_line():
    g = parse_grammar(G1_TEXT)
    r5 = g.rules[-1]
    assert (r5.lhs, r5.rhs) == (("A", "B"), ())
    assert g.sprime == "S'"
    assert g.nprime == {"S", "X", "Z", "S'"}


def test_grammar_kind_mismatch():
    with pytest.raises(ParseError, match="single left-hand symbol"):
        parse_grammar("@grammar g kind=rc\n@nonterminals S A B\n@terminals\n@start S\n"
                      "@rule r [A] [B] -> []\n")
    with pytest.raises(ParseError, match="kind"):
        parse_grammar("@grammar g kind=zz\n@nonterminals S\n@terminals\n@start S\n")


def test_system_round_trip():
    for s in [gamma_ab(), compile_rc200(parse_grammar(G1_TEXT))] + \
             [g.system for g in golden_suite()]:
        back = parse_system(render_system(s))
        assert back == s
        assert size_of(back) == size_of(s) and degree_of(back) == degree_of(s)


def test_grammar_round_trip(g2):
    for g in (g2, parse_grammar(G1_TEXT)):
        assert parse_grammar(render_grammar(g)) == g


def test_trace_round_trip():
    t = gamma_ab_trace()
    assert parse_trace(render_trace(t)) == t
    assert parse_trace("@trace x\n@start []\n") == Trace("x", ())
    with pytest.raises(ParseError, match="line 3"):
        parse_trace("@trace x\n@start []\nstep i1 at 2\n")


def test_file_kind():
    assert file_kind("# hi\n@trace x\n") == "trace"
    with pytest.raises(ParseError):
        file_kind("@axiom [a]\n")


def test_enumerate_no_rule_system(tmp_path, capsys):
    path = _write(tmp_path, "ab.sys", "@system ab\n@alphabet a b\n@terminals a b\n@axiom [a b]\n")
    assert main(["enumerate", path]) == 0
    assert capsys.readouterr().out == "[a b]\nEXHAUSTED true\n"


def test_enumerate_sorted_by_length_then_names(tmp_path, capsys):
    path = tmp_path / "g.sys"
    path.write_text(render_system(gamma_ab()))
    assert main(["enumerate", str(path), "--max-len", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "[a b]"
    assert lines[1:3] == ["[a b a]", "[a b b]"]
    assert lines[3:-1] == sorted(lines[3:-1])
    assert lines[-1] == "EXHAUSTED true"


def test_enumerate_grammar_file(tmp_path, capsys):
    path = _write(tmp_path, "g1.gr", G1_TEXT)
    assert main(["enumerate", path, "--max-len", "3"]) == 0
    assert capsys.readouterr().out == "[a]\nEXHAUSTED true\n"


def test_compile_then_compare(tmp_path, capsys):
    grammar = _write(tmp_path, "g1.gr", G1_TEXT)
    out = str(tmp_path / "g1.sys")
    assert main(["compile", grammar, "--construction", "rc200", "-o", out]) == 0
    text = open(out).read()
    assert "# construction: rc200" in text
    assert "# size: (2,0,0;1,1,0)" in text
    assert "# degree: (1,1)" in text
    assert main(["compare", grammar, out, "--map", "identity", "--max-len", "3"]) == 0
    assert capsys.readouterr().out == "VERDICT equal\n"


def test_compile_output_reparses_with_same_size(tmp_path, g2):
    grammar = tmp_path / "g2.gr"
    grammar.write_text(render_grammar(g2))
    out = tmp_path / "g2.sys"
    assert main(["compile", str(grammar), "--construction", "sc22", "-o", str(out)]) == 0
    back = parse_system(out.read_text())
    assert back == compile_sc22(g2)
    assert size_of(back) == (1, 0, 0, 1, 0, 0)


def test_compile_cf_approx(tmp_path, capsys):
    path = _write(tmp_path, "s.sys", "@system s\n@alphabet a b\n@terminals a b\n@axiom [a b]\n"
                                     "@rule ia ins ([])([a])([])\n")
    assert main(["compile", path, "--construction", "cf-approx"]) == 0
    g = parse_grammar(capsys.readouterr().out)
    assert g.kind == "cf" and g.start == "S0"


def test_compare_not_equal_exits_one(tmp_path, capsys):
    grammar = _write(tmp_path, "g.gr", "@grammar g kind=cf\n@nonterminals S\n@terminals a b\n"
                                       "@start S\n@rule r [S] -> [a]\n")
    system = _write(tmp_path, "s.sys", "@system s\n@alphabet a b\n@terminals a b\n@axiom [b]\n")
    assert main(["compare", grammar, system]) == 1
    assert capsys.readouterr().out.splitlines() == [
        "VERDICT incomparable", "EXTRA [b]", "MISSING [a]"]


def test_compare_with_map_file(tmp_path):
    grammar = _write(tmp_path, "g.gr", "@grammar g kind=cf\n@nonterminals S\n@terminals a\n"
                                       "@start S\n@rule r [S] -> [a]\n")
    system = _write(tmp_path, "s.sys", "@system s\n@alphabet x\n@terminals x\n@axiom [x]\n")
    mapping = _write(tmp_path, "m.txt", "# code\nx a\n")
    assert main(["compare", grammar, system, "--map-file", mapping]) == 0


def test_pump_gamma_ab(tmp_path, capsys):
    sys_path = tmp_path / "g.sys"
    sys_path.write_text(render_system(gamma_ab()))
    trace_path = tmp_path / "g.tr"
    trace_path.write_text(render_trace(gamma_ab_trace()))
    assert main(["pump", str(sys_path), str(trace_path), "--step", "1", "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("# final [a b a b b b]")
    assert parse_trace(out).steps[-3:] == (("i2", 3),) * 3


def test_replay_success_and_failure(tmp_path, capsys):
    sys_path = tmp_path / "g.sys"
    sys_path.write_text(render_system(gamma_ab()))
    good = _write(tmp_path, "good.tr", "@trace gamma_ab\n@start [a b]\nstep i1 @ 2\n")
    bad = _write(tmp_path, "bad.tr", "@trace gamma_ab\n@start [a b]\nstep i1 @ 1\n")
    assert main(["replay", str(sys_path), good]) == 0
    assert capsys.readouterr().out == "[a b a]\n"
    assert main(["replay", str(sys_path), bad]) == 1
    assert "context-mismatch" in capsys.readouterr().out


def test_replay_golden_trace_needs_any_start(tmp_path):
    g = golden_suite()[0]
    sys_path = tmp_path / "p.sys"
    sys_path.write_text(render_system(g.system))
    trace = _write(tmp_path, "p.tr", render_trace(g.trace))
    assert main(["replay", str(sys_path), trace]) == 1
    assert main(["replay", str(sys_path), trace, "--any-start"]) == 0


def test_check_reports(tmp_path, capsys):
    grammar = _write(tmp_path, "g1.gr", G1_TEXT)
    assert main(["check", grammar]) == 0
    assert "SGNF valid" in capsys.readouterr().out
    bad = _write(tmp_path, "bad.gr", "@grammar g kind=sgnf\n@nprime S X\n@terminals\n@start S\n"
                                     "@rule r [X] -> [B X]\n")
    assert main(["check", bad]) == 1


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["enumerate"],
    ["compile", "x", "--construction", "nope"],
    ["pump", "a", "b", "--step", "1"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_parse_and_io_errors_exit_two(tmp_path, capsys):
    bad = _write(tmp_path, "bad.sys", "@system t\n@alphabet a\n@terminals a\n@axiom [a]\n"
                                      "@rule r ins ([])([b])([])\n")
    assert main(["check", bad]) == 2
    assert "unknown symbol b at line 5" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.sys")]) == 2
    assert main(["enumerate", bad.replace("bad", "none")]) == 2
    good = _write(tmp_path, "ok.sys", "@system t\n@alphabet a\n@terminals a\n@axiom [a]\n")
    assert main(["enumerate", good, "--max-len", "-1"]) == 2
    assert main(["compile", good, "--construction", "rc200"]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0


def test_parallel_enumeration_output_is_identical(tmp_path, capsys):
    path = tmp_path / "g1.sys"
    path.write_text(render_system(compile_rc200(parse_grammar(G1_TEXT))))
    outs = []
    for workers in ("1", "3"):
        assert main(["enumerate", str(path), "--max-len", "3", "--max-form-len", "12",
                     "--max-steps", "48", "--workers", workers]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == "[a]\nEXHAUSTED true\n"


def test_rules_with_commas_between_words():
    s = parse_system("@system t\n@alphabet a\n@terminals a\n@axiom [a]\n"
                     "@rule r ins ([])([a])([]) permit {[a], [a a]} forbid {}\n")
    assert s.rules[0] == ins("r", ["a"], permit=[("a",), ("a", "a")])

import pytest

from insdel import Grammar, GrammarRule, InsDelSystem, ins

_criteria = []


def sgnf(name, rules, nprime, terminals, start="S", sprime=None):
    nd = {"A", "B", "C", "D"}
    return Grammar(name, "sgnf", set(nprime) | nd, terminals, start,
                   tuple(GrammarRule(*r) for r in rules), nprime=nprime, ndouble=nd,
                   sprime=sprime)


def rc(name, rules, nonterminals, terminals, start="S"):
    return Grammar(name, "rc", nonterminals, terminals, start,
                   tuple(GrammarRule(*r) for r in rules))


@pytest.fixture
def g1():
    """S -> AX, X -> Za, Z -> S'B, S' -> λ, AB -> λ; generates exactly [a]."""
    return sgnf("G1", [("r1", ["S"], ["A", "X"]), ("r2", ["X"], ["Z", "a"]),
                       ("r3", ["Z"], ["S'", "B"]), ("r4", ["S'"], []),
                       ("r5", ["A", "B"], [])],
                {"S", "X", "Z", "S'"}, {"a"}, sprime="S'")


@pytest.fixture
def g2():
    return rc("G2", [("r1", ["S"], ["a", "S"]), ("r2", ["S"], [])], {"S"}, {"a"})


@pytest.fixture
def ab_system():
    return InsDelSystem("ab", {"a", "b"}, {"a", "b"}, (("a", "b"),), ())


@pytest.fixture
def ab_insert_system():
    return InsDelSystem("ab_ins", {"a", "b"}, {"a", "b"}, (("a", "b"),),
                        (ins("r", ["a", "b"]),))


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _criteria.append((props["criterion"], report.passed, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {number}: {detail}")

"""Cross-checks between compiled systems and their source grammars."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .construct import BEGIN, END, bar, build_rc200, build_sc22, hat, sharp
from .core import InsDelSystem, MalformedInput, SymString, ins, is_subword, show
from .engine import (ReplayError, SearchBounds, Trace, enumerate_language, pump_insertion,
                     replay, replay_forms)
from .grammar import Grammar, GrammarRule, derive_grammar

VERDICTS = ("equal", "subset", "superset", "incomparable", "inconclusive")


@dataclass(frozen=True)
class AlphabetMorphism:
    mapping: dict | None = None  # None means identity

    @classmethod
    def identity(cls):
        return cls(None)

    @classmethod
    def unhat(cls, symbols):
        return cls({s: s[len("hat_"):] for s in symbols if s.startswith("hat_")})

    def __call__(self, w) -> SymString:
        if self.mapping is None:
            return tuple(w)
        return tuple(self.mapping[s] for s in w)

    def check(self, symbols):
        if self.mapping is None:
            return
        gaps = sorted(set(symbols) - set(self.mapping))
        if gaps:
            raise MalformedInput(f"morphism is undefined on {gaps}")
        images = [self.mapping[s] for s in symbols]
        if len(set(images)) != len(images):
            raise MalformedInput("morphism is not injective on the terminal alphabet")


@dataclass(frozen=True)
class ComparisonReport:
    system_terminals: frozenset
    grammar_terminals: frozenset
    missing: frozenset
    extra: frozenset
    both_exhausted: bool
    verdict: str
    system_states: int = 0
    grammar_states: int = 0

    def lines(self) -> list:
        """Machine-readable form: one VERDICT line, then EXTRA and MISSING words."""
        key = lambda w: (len(w), w)
        out = [f"VERDICT {self.verdict}"]
        out += [f"EXTRA {show(w)}" for w in sorted(self.extra, key=key)]
        out += [f"MISSING {show(w)}" for w in sorted(self.missing, key=key)]
        return out

    def text(self) -> str:
        key = lambda w: (len(w), w)
        fmt = lambda ws: ", ".join(show(w) for w in sorted(ws, key=key)) or "(none)"
        return "\n".join([
            f"system language:  {fmt(self.system_terminals)}",
            f"grammar language: {fmt(self.grammar_terminals)}",
            f"both searches exhausted: {self.both_exhausted}"
            f" (system states {self.system_states}, grammar states {self.grammar_states})",
            f"verdict: {self.verdict}",
        ])


def _verdict(sys_words, gram_words, exhausted):
    if not exhausted:
        return "inconclusive"
    if sys_words == gram_words:
        return "equal"
    if sys_words < gram_words:
        return "subset"
    if sys_words > gram_words:
        return "superset"
    return "incomparable"


def compare_languages(system: InsDelSystem, g: Grammar, morphism: AlphabetMorphism,
                      bounds: SearchBounds = SearchBounds(), workers: int = 1) -> ComparisonReport:
    """Compare bounded languages; inequality is only claimed when both searches exhausted."""
    morphism.check(system.terminals)
    sys_res = enumerate_language(system, bounds, workers)
    gram_res = derive_grammar(g, bounds)
    sys_words = frozenset(morphism(w) for w in sys_res.terminals)
    gram_words = gram_res.terminals
    exhausted = sys_res.exhausted and gram_res.exhausted
    return ComparisonReport(sys_words, gram_words, gram_words - sys_words, sys_words - gram_words,
                            exhausted, _verdict(sys_words, gram_words, exhausted),
                            sys_res.states, gram_res.states)


# -- golden traces --------------------------------------------------------------


@dataclass(frozen=True)
class GoldenTrace:
    name: str
    system: InsDelSystem
    trace: Trace
    expected: SymString | None = None   # final form; None for expected failures
    normalized: frozenset | None = None  # forbidden words every form must avoid
    fail_at: int | None = None           # step index a corrupted trace must fail at


@dataclass(frozen=True)
class GoldenResult:
    name: str
    passed: bool
    failed_step: int | None
    message: str


def check_golden_traces(suite) -> list:
    results = []
    for g in suite:
        try:
            forms = replay_forms(g.system, g.trace, allow_any_start=True)
        except ReplayError as err:
            ok = g.fail_at is not None and err.index == g.fail_at
            results.append(GoldenResult(g.name, ok, err.index, str(err)))
            continue
        if g.fail_at is not None:
            results.append(GoldenResult(g.name, False, None,
                                        f"expected failure at step {g.fail_at}, trace replayed"))
            continue
        if g.normalized is not None:
            broken = [(i, f) for i, f in enumerate(forms)
                      if any(is_subword(x, f) for x in g.normalized)]
            if broken:
                i, f = broken[0]
                results.append(GoldenResult(g.name, False, i,
                                            f"form {i} {show(f)} breaks the normal form"))
                continue
        if forms[-1] != tuple(g.expected):
            results.append(GoldenResult(g.name, False, len(forms) - 1,
                                        f"final {show(forms[-1])} != {show(g.expected)}"))
            continue
        results.append(GoldenResult(g.name, True, None, f"final {show(forms[-1])}"))
    return results


def _rc(name, rules, nonterminals, terminals, start="S"):
    return Grammar(name, "rc", nonterminals, terminals, start, tuple(rules))


def _sgnf(name, rules, nprime, terminals, start="S", sprime=None):
    nd = {"A", "B", "C", "D"}
    return Grammar(name, "sgnf", set(nprime) | nd, terminals, start, tuple(rules),
                   nprime=nprime, ndouble=nd, sprime=sprime)


def golden_suite() -> list:
    """The derivations displayed in the constructions' proofs, replayed on compiled rules.

    Unspecified surrounding contexts are fixed to the smallest legal choice: the
    terminators for the semi-conditional traces and λ for the random context ones.
    Each sequence comes with a corrupted variant that must fail at a known step.
    """
    suite = []
    B, E = BEGIN, END

    # erasing rule p: X -> λ
    gp = _rc("sc_p", [GrammarRule("p", ("X",), ())], {"S", "X"}, set())
    sp, art = build_sc22(gp)
    Xh, Xb, h = hat("X"), bar("X"), sharp("p")
    start = (B, Xh, Xb, E)
    steps = [("p.1", 1), ("p.2", 2), ("p.3", 2), ("p.4", 1)]
    suite.append(GoldenTrace("sc22 p.1-p.4", sp, Trace(sp.name, start, steps), (B, E),
                             normalized=art.q_n))
    bad = [("p.1", 1), ("p.2", 2), ("p.4", 1), ("p.3", 1)]
    suite.append(GoldenTrace("sc22 p with p.4 before p.3", sp, Trace(sp.name, start, bad),
                             fail_at=3))

    # binary rule q: S -> YZ
    gq = _rc("sc_q", [GrammarRule("q", ("S",), ("Y", "Z"))], {"S", "Y", "Z"}, set())
    sq, art = build_sc22(gq)
    start = (B, hat("S"), bar("S"), E)
    steps = [("q.1", 1), ("q.2", 4), ("q.3", 2), ("q.4", 1), ("q.5", 2), ("q.6", 2),
             ("q.7", 1), ("q.8", 3), ("q.9", 3), ("q.10", 2), ("q.11", 3), ("q.12", 5),
             ("q.13", 6), ("q.14", 4), ("q.15", 1), ("q.16", 5)]
    final = (B, hat("Y"), bar("Y"), hat("Z"), bar("Z"), E)
    suite.append(GoldenTrace("sc22 q.1-q.16", sq, Trace(sq.name, start, steps), final,
                             normalized=art.q_n))
    bad = steps[:4] + [("q.6", 3)] + steps[4:]
    suite.append(GoldenTrace("sc22 q with q.6 before q.5", sq, Trace(sq.name, start, bad),
                             fail_at=4))

    # random context: X -> aY, X -> Ya, AB -> λ
    g3 = _sgnf("rc_pqr", [GrammarRule("p", ("X",), ("a", "Y")),
                          GrammarRule("q", ("X",), ("Y", "a")),
                          GrammarRule("r", ("A", "B"), ())], {"S", "X", "Y"}, {"a"})
    s3, _ = build_rc200(g3)
    p_steps = [("p.1", 0), ("p.2", 2)]
    suite.append(GoldenTrace("rc200 p.1-p.2", s3, Trace(s3.name, ("X",), p_steps), ("a", "Y")))
    suite.append(GoldenTrace("rc200 p with p.2 first", s3,
                             Trace(s3.name, ("X",), [("p.2", 0), ("p.1", 0)]), fail_at=0))
    q_steps = [("q.1", 0), ("q.2", 2), ("q.3", 1), ("q.4", 3), ("q.5", 0)]
    suite.append(GoldenTrace("rc200 q.1-q.5", s3, Trace(s3.name, ("X",), q_steps), ("Y", "a")))
    bad = [("q.1", 0), ("q.3", 1)] + q_steps[1:2]
    suite.append(GoldenTrace("rc200 q with q.3 before q.2", s3,
                             Trace(s3.name, ("X",), bad), fail_at=1))
    start = (hat("A"), bar("A"), hat("B"), bar("B"))
    r_steps = [("r.1", 1), ("r.2", 1), ("r.3", 1), ("r.4", 2), ("r.5", 2), ("r.6", 1),
               ("r.7", 2), ("r.8", 2), ("r.11", 3), ("r.12", 3), ("r.13", 1), ("r.14", 2),
               ("r.15", 2), ("r.16", 2), ("r.17", 1)]
    suite.append(GoldenTrace("rc200 r.1-r.17", s3, Trace(s3.name, start, r_steps), (hat("A"),)))
    suite.append(GoldenTrace("rc200 r.1-r.17 then r.18", s3,
                             Trace(s3.name, start, r_steps + [("r.18", 0)]), ()))
    bad = [("r.1", 1), ("r.3", 1), ("r.2", 2)]
    suite.append(GoldenTrace("rc200 r with r.3 before r.2", s3,
                             Trace(s3.name, start, bad), fail_at=1))
    return suite


# -- pumping ----------------------------------------------------------------------

AB_PLUS = re.compile(r"(ab)+")


def in_ab_plus(w) -> bool:
    return all(len(s) == 1 for s in w) and AB_PLUS.fullmatch("".join(w)) is not None


def gamma_ab() -> InsDelSystem:
    """Left-context one-symbol insertions that grow ``ab`` by appending a, then b."""
    return InsDelSystem("gamma_ab", {"a", "b"}, {"a", "b"}, (("a", "b"),),
                        (ins("i1", ["a"], left=["b"]), ins("i2", ["b"], left=["a"])))


def gamma_ab_trace() -> Trace:
    return Trace("gamma_ab", ("a", "b"), [("i1", 2), ("i2", 3)])


@dataclass(frozen=True)
class PumpOutcome:
    original: SymString
    pumped_trace: Trace
    pumped: SymString
    pumped_outside: bool
    enumerated_outside: frozenset


def pump_falsification(k: int = 1, cap: int = 5) -> PumpOutcome:
    """Pump the last insertion of the ``ab -> aba -> abab`` derivation in ``gamma_ab``."""
    system = gamma_ab()
    trace = gamma_ab_trace()
    original = replay(system, trace)
    pumped_trace = pump_insertion(system, trace, len(trace.steps) - 1, k)
    pumped = replay(system, pumped_trace)
    words = enumerate_language(system, SearchBounds(max_terminal_len=cap, max_form_len=cap,
                                                    max_steps=cap)).terminals
    return PumpOutcome(original, pumped_trace, pumped, not in_ab_plus(pumped),
                       frozenset(w for w in words if not in_ab_plus(w)))

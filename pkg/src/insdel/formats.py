"""Line-oriented text formats for systems, grammars and traces.

Strings are bracketed symbol lists, ``[]`` is the empty word and ``#`` starts a
comment.  A system file::

    @system t
    @alphabet a b X Y
    @terminals a b
    @axiom [X]
    @rule p2 del ([Y])([X])([]) permit {} forbid {}

A grammar file::

    @grammar G kind=rc
    @nonterminals S
    @terminals a
    @start S
    @rule r1 [S] -> [a S] permit {[S]} forbid {}

SGNF grammars also declare ``@nprime``, ``@ndouble`` and ``@sprime``.  A trace::

    @trace t
    @start [X]
    step p1 @ 0
"""

from __future__ import annotations

import re

from .core import ContextRule, ConditionedRule, InsDelSystem, MalformedInput, show
from .engine import Trace
from .grammar import Grammar, GrammarRule

TOKEN = re.compile(r"[\[\](){}]|[^\s\[\](){}]+")


class ParseError(MalformedInput):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"{message} at line {line}" if line is not None else message)


class _Tokens:
    def __init__(self, text, line):
        self.items = [t for t in TOKEN.findall(text) if t != ","]
        self.i = 0
        self.line = line

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line)
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}", self.line)

    def string(self):
        self.expect("[")
        out = []
        while self.peek() != "]":
            tok = self.next()
            if tok in "(){}[":
                raise ParseError(f"unexpected {tok!r} inside a string", self.line)
            out.append(tok)
        self.next()
        return tuple(out)

    def word_set(self):
        self.expect("{")
        out = set()
        while self.peek() != "}":
            w = self.string()
            if not w:
                raise ParseError("condition words must be non-empty", self.line)
            out.add(w)
        self.next()
        return frozenset(out)

    def conditions(self):
        permit, forbid = frozenset(), frozenset()
        while self.peek() is not None:
            key = self.next()
            if key == "permit":
                permit = self.word_set()
            elif key == "forbid":
                forbid = self.word_set()
            else:
                raise ParseError(f"expected 'permit' or 'forbid', got {key!r}", self.line)
        return permit, forbid

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r}", self.line)


def _lines(text):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _directive(line):
    head, _, rest = line.partition(" ")
    return head, rest.strip()


def file_kind(text: str) -> str:
    for _, line in _lines(text):
        head = _directive(line)[0]
        if head in ("@system", "@grammar", "@trace"):
            return head[1:]
        break
    raise ParseError("file must start with @system, @grammar or @trace")


def _check_symbols(symbols, known, line):
    for s in symbols:
        if s not in known:
            raise ParseError(f"unknown symbol {s}", line)


def parse_system(text: str) -> InsDelSystem:
    name = None
    alphabet, terminals, axioms, rules = set(), set(), [], []
    pending = []
    for n, line in _lines(text):
        head, rest = _directive(line)
        if head == "@system":
            name = rest
        elif head == "@alphabet":
            alphabet.update(rest.split())
        elif head == "@terminals":
            terminals.update(rest.split())
        elif head in ("@axiom", "@rule"):
            pending.append((n, head, rest))
        else:
            raise ParseError(f"unknown directive {head!r}", n)
    if not name:
        raise ParseError("missing @system line")
    _check_symbols(terminals, alphabet, None)
    ids = set()
    for n, head, rest in pending:
        tok = _Tokens(rest, n)
        if head == "@axiom":
            w = tok.string()
            tok.done()
            _check_symbols(w, alphabet, n)
            axioms.append(w)
            continue
        rid = tok.next()
        if rid in ids:
            raise ParseError(f"duplicate rule id {rid}", n)
        ids.add(rid)
        mode = tok.next()
        if mode not in ("ins", "del"):
            raise ParseError(f"rule mode must be ins or del, got {mode!r}", n)
        parts = []
        for _ in range(3):
            tok.expect("(")
            parts.append(tok.string())
            tok.expect(")")
        if not parts[1]:
            raise ParseError(f"rule {rid} has an empty inserted/deleted string", n)
        permit, forbid = tok.conditions()
        for w in [*parts, *permit, *forbid]:
            _check_symbols(w, alphabet, n)
        rules.append(ConditionedRule(rid, ContextRule(mode, *parts), permit, forbid))
    if not axioms:
        raise ParseError("missing @axiom line")
    return InsDelSystem(name, alphabet, terminals, tuple(axioms), tuple(rules))


def _words(ws):
    return " ".join(show(w) for w in sorted(ws))


def render_system(system: InsDelSystem, header=()) -> str:
    out = [f"# {h}" for h in header]
    out += [f"# {n}" for n in system.notes]
    out.append(f"@system {system.name}")
    out.append("@alphabet " + " ".join(sorted(system.alphabet)))
    out.append("@terminals " + " ".join(sorted(system.terminals)))
    out += [f"@axiom {show(a)}" for a in system.axioms]
    for r in system.rules:
        b = r.base
        line = f"@rule {r.id} {b.mode} ({show(b.left)})({show(b.body)})({show(b.right)})"
        line += f" permit {{{_words(r.permit)}}} forbid {{{_words(r.forbid)}}}"
        out.append(line)
    return "\n".join(out) + "\n"


def parse_grammar(text: str) -> Grammar:
    name = kind = start = sprime = None
    nts, ts, nprime, ndouble = None, set(), set(), set()
    pending = []
    for n, line in _lines(text):
        head, rest = _directive(line)
        if head == "@grammar":
            parts = rest.split()
            if not parts:
                raise ParseError("@grammar needs a name", n)
            name = parts[0]
            for opt in parts[1:]:
                key, _, val = opt.partition("=")
                if key != "kind":
                    raise ParseError(f"unknown grammar option {opt!r}", n)
                kind = val
        elif head == "@nonterminals":
            nts = (nts or set()) | set(rest.split())
        elif head == "@terminals":
            ts.update(rest.split())
        elif head == "@start":
            start = rest
        elif head == "@nprime":
            nprime.update(rest.split())
        elif head == "@ndouble":
            ndouble.update(rest.split())
        elif head == "@sprime":
            sprime = rest
        elif head == "@rule":
            pending.append((n, rest))
        else:
            raise ParseError(f"unknown directive {head!r}", n)
    if not name:
        raise ParseError("missing @grammar line")
    if kind not in ("cf", "rc", "sc", "sgnf"):
        raise ParseError(f"grammar kind must be cf, rc, sc or sgnf, got {kind!r}")
    if kind == "sgnf" and not ndouble:
        ndouble = {"A", "B", "C", "D"} if nts is None else {"A", "B", "C", "D"} & nts
    if nts is None:
        nts = nprime | ndouble
    known = nts | ts
    rules = []
    ids = set()
    for n, rest in pending:
        tok = _Tokens(rest, n)
        rid = tok.next()
        if rid in ids:
            raise ParseError(f"duplicate rule id {rid}", n)
        ids.add(rid)
        lhs = []
        while tok.peek() == "[":
            lhs += tok.string()
        tok.expect("->")
        rhs = tok.string()
        permit, forbid = tok.conditions()
        for w in [lhs, rhs, *permit, *forbid]:
            _check_symbols(w, known, n)
        if kind != "sgnf" and len(lhs) != 1:
            raise ParseError(f"rule {rid}: {kind} rules need a single left-hand symbol", n)
        if kind in ("cf", "sgnf") and (permit or forbid):
            raise ParseError(f"rule {rid}: {kind} rules carry no conditions", n)
        if kind == "rc" and any(len(w) != 1 or w[0] not in nts for w in permit | forbid):
            raise ParseError(f"rule {rid}: random context conditions must be single "
                             "nonterminals", n)
        rules.append(GrammarRule(rid, tuple(lhs), rhs, permit, forbid))
    return Grammar(name, kind, nts, ts, start, tuple(rules), nprime=nprime, ndouble=ndouble,
                   sprime=sprime)


def render_grammar(g: Grammar, header=()) -> str:
    out = [f"# {h}" for h in header]
    out += [f"# {n}" for n in g.notes]
    out.append(f"@grammar {g.name} kind={g.kind}")
    out.append("@nonterminals " + " ".join(sorted(g.nonterminals)))
    out.append("@terminals " + " ".join(sorted(g.terminals)))
    out.append(f"@start {g.start}")
    if g.nprime:
        out.append("@nprime " + " ".join(sorted(g.nprime)))
    if g.ndouble:
        out.append("@ndouble " + " ".join(sorted(g.ndouble)))
    if g.sprime:
        out.append(f"@sprime {g.sprime}")
    for r in g.rules:
        line = f"@rule {r.id} {show(r.lhs)} -> {show(r.rhs)}"
        if r.permit or r.forbid:
            line += f" permit {{{_words(r.permit)}}} forbid {{{_words(r.forbid)}}}"
        out.append(line)
    return "\n".join(out) + "\n"


def parse_trace(text: str) -> Trace:
    name, start, steps = None, None, []
    for n, line in _lines(text):
        head, rest = _directive(line)
        if head == "@trace":
            name = rest
        elif head == "@start":
            tok = _Tokens(rest, n)
            start = tok.string()
            tok.done()
        elif head == "step":
            m = re.fullmatch(r"(\S+)\s*@\s*(\d+)", rest)
            if not m:
                raise ParseError("steps look like 'step RULE @ POSITION'", n)
            steps.append((m.group(1), int(m.group(2))))
        else:
            raise ParseError(f"unknown directive {head!r}", n)
    if name is None or start is None:
        raise ParseError("a trace needs @trace and @start lines")
    return Trace(name, start, tuple(steps))


def render_trace(trace: Trace) -> str:
    out = [f"@trace {trace.system_name}", f"@start {show(trace.start)}"]
    out += [f"step {r} @ {p}" for r, p in trace.steps]
    return "\n".join(out) + "\n"

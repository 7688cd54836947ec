"""Conditional context-free grammars and the transformations the compilers need.

Grammar kinds:

``cf``    plain context-free rules.
``rc``    random context: permitting/forbidding sets of single nonterminals.
``sc``    semi-conditional: permitting/forbidding sets of arbitrary words.
``sgnf``  special Geffert normal form, with declared N', N'' and S'.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .core import MalformedInput, SymString, check_symbol, is_subword, show
from .engine import EnumerationResult, SearchBounds

KINDS = ("cf", "rc", "sc", "sgnf")


class GrammarError(MalformedInput):
    pass


@dataclass(frozen=True)
class GrammarRule:
    id: str
    lhs: SymString
    rhs: SymString
    permit: frozenset = frozenset()
    forbid: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(self.lhs))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        for part in ("permit", "forbid"):
            words = frozenset(tuple(x) for x in getattr(self, part))
            if any(not x for x in words):
                raise GrammarError(f"rule {self.id}: condition words must be non-empty")
            object.__setattr__(self, part, words)
        if not self.lhs:
            raise GrammarError(f"rule {self.id}: empty left-hand side")

    def __str__(self):
        return f"{self.id}: {show(self.lhs)} -> {show(self.rhs)}"


@dataclass(frozen=True)
class Grammar:
    name: str
    kind: str
    nonterminals: frozenset
    terminals: frozenset
    start: str
    rules: tuple
    nprime: frozenset = frozenset()
    ndouble: frozenset = frozenset()
    sprime: str | None = None
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GrammarError(f"unknown grammar kind {self.kind!r}")
        for part in ("nonterminals", "terminals", "nprime", "ndouble"):
            object.__setattr__(self, part, frozenset(getattr(self, part)))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "notes", tuple(self.notes))
        for s in self.nonterminals | self.terminals:
            check_symbol(s)
        if self.nonterminals & self.terminals:
            raise GrammarError(f"symbols both terminal and nonterminal: "
                               f"{sorted(self.nonterminals & self.terminals)}")
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start!r} is not a nonterminal")
        if self.kind == "sgnf":
            if not (self.nprime | self.ndouble) <= self.nonterminals:
                raise GrammarError("N' and N'' must be subsets of the nonterminals")
            if self.sprime is not None and self.sprime not in self.nprime:
                raise GrammarError("S' must belong to N'")
        alphabet = self.alphabet
        ids = set()
        for r in self.rules:
            if r.id in ids:
                raise GrammarError(f"duplicate rule id {r.id!r}")
            ids.add(r.id)
            for s in itertools.chain(r.lhs, r.rhs, *r.permit, *r.forbid):
                if s not in alphabet:
                    raise GrammarError(f"rule {r.id}: unknown symbol {s!r}")
            if self.kind != "sgnf" and (len(r.lhs) != 1 or r.lhs[0] not in self.nonterminals):
                raise GrammarError(f"rule {r.id}: left-hand side must be one nonterminal")
            if self.kind == "sgnf" and len(r.lhs) == 2:
                if r.rhs or set(r.lhs) - self.ndouble:
                    raise GrammarError(f"rule {r.id}: two-symbol left-hand sides must be "
                                       "erasing rules over N''")
            elif self.kind == "sgnf" and (len(r.lhs) != 1 or r.lhs[0] not in self.nonterminals):
                raise GrammarError(f"rule {r.id}: bad left-hand side {show(r.lhs)}")
            if self.kind == "cf" and (r.permit or r.forbid):
                raise GrammarError(f"rule {r.id}: context-free rules carry no conditions")
            if self.kind == "sgnf" and (r.permit or r.forbid):
                raise GrammarError(f"rule {r.id}: SGNF rules carry no conditions")
            if self.kind == "rc":
                for x in r.permit | r.forbid:
                    if len(x) != 1 or x[0] not in self.nonterminals:
                        raise GrammarError(f"rule {r.id}: random context conditions must be "
                                           f"single nonterminals, got {show(x)}")

    @property
    def alphabet(self) -> frozenset:
        return self.nonterminals | self.terminals


# -- special Geffert normal form ------------------------------------------------


@dataclass(frozen=True)
class SgnfReport:
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_sgnf(g: Grammar, allow_terminal_prefix: bool = False) -> SgnfReport:
    """Check every rule against the five SGNF shapes.

    ``allow_terminal_prefix`` additionally accepts ``X -> cY`` with ``c`` terminal,
    a shape the random-context compiler handles although SGNF never produces it.
    """
    if g.kind != "sgnf":
        raise GrammarError(f"validate_sgnf needs an sgnf grammar, got kind {g.kind!r}")
    np, nd, T = g.nprime, g.ndouble, g.terminals
    bad = []
    erasers = {("A", "B"), ("C", "D")}
    exempt = {g.start} | ({g.sprime} if g.sprime else set())
    by_rhs = {}
    for r in g.rules:
        lhs, rhs = r.lhs, r.rhs
        if len(lhs) == 2:
            if lhs not in erasers or rhs:
                bad.append((r.id, "only AB -> λ and CD -> λ may have two-symbol left sides"))
            continue
        X = lhs[0]
        if not rhs:
            if X != g.sprime:
                bad.append((r.id, "only S' -> λ may erase"))
            continue
        if len(rhs) != 2:
            bad.append((r.id, "right-hand side must have length 2"))
            continue
        if X not in np:
            bad.append((r.id, f"left-hand side {X} must be in N'"))
            continue
        b, Y = rhs
        if Y in np and (b in nd or (allow_terminal_prefix and b in T)):
            if X == Y:
                bad.append((r.id, "X ≠ Y required"))
                continue
            by_rhs.setdefault(rhs, set()).add(X)
            continue
        Y, b = rhs
        if Y in np and (b in T or b in nd):
            if X == Y:
                bad.append((r.id, "X ≠ Y required"))
                continue
            if Y not in exempt:
                by_rhs.setdefault(rhs, set()).add(X)
            continue
        bad.append((r.id, f"{show(lhs)} -> {show(rhs)} matches no SGNF shape"))
    for rhs, lhss in sorted(by_rhs.items()):
        if len(lhss) > 1:
            bad.append(("*", f"right-hand side {show(rhs)} is shared by {sorted(lhss)}"))
    return SgnfReport(tuple(bad))


# -- random-context right-hand-side normalization --------------------------------


def chain_symbol(rule_id: str, i: int) -> str:
    return f"W_{rule_id}_{i}"


def normalize_rc_rhs(g: Grammar) -> Grammar:
    """Make every right-hand side have length 0 or 2.

    A rule ``r: A -> u1...un`` with n not in {0, 2} becomes ``A -> u1 W1`` (original
    conditions plus all chain symbols forbidden), unconditioned chain rules
    ``Wi -> u(i+1) W(i+1)`` and ``Wn -> λ``.
    """
    if g.kind != "rc":
        raise GrammarError(f"normalize_rc_rhs needs an rc grammar, got kind {g.kind!r}")
    split = [r for r in g.rules if len(r.rhs) not in (0, 2)]
    fresh = {chain_symbol(r.id, i) for r in split for i in range(1, len(r.rhs) + 1)}
    clash = fresh & g.alphabet
    if clash:
        raise GrammarError(f"generated chain symbols collide with grammar symbols: {sorted(clash)}")
    q_w = frozenset((w,) for w in fresh)
    rules = []
    for r in g.rules:
        n = len(r.rhs)
        if n in (0, 2):
            rules.append(r)
            continue
        W = [chain_symbol(r.id, i) for i in range(1, n + 1)]
        rules.append(GrammarRule(r.id, r.lhs, (r.rhs[0], W[0]), r.permit, r.forbid | q_w))
        for i in range(1, n):
            rules.append(GrammarRule(f"{r.id}.W{i}", (W[i - 1],), (r.rhs[i], W[i])))
        rules.append(GrammarRule(f"{r.id}.W{n}", (W[n - 1],), ()))
    return Grammar(g.name, "rc", g.nonterminals | fresh, g.terminals, g.start, tuple(rules),
                   notes=g.notes)


# -- λ-elimination ---------------------------------------------------------------


def nullable_symbols(g: Grammar) -> set:
    nullable = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs[0] not in nullable and all(s in nullable for s in r.rhs):
                nullable.add(r.lhs[0])
                changed = True
    return nullable


def eliminate_lambda(g: Grammar) -> Grammar:
    """Standard nullable-closure λ-elimination for context-free grammars.

    The result generates the same non-empty strings and has no erasing rules.
    """
    if g.kind != "cf":
        raise GrammarError(f"eliminate_lambda needs a cf grammar, got kind {g.kind!r}")
    nullable = nullable_symbols(g)
    rules = []
    produced = set()
    for r in g.rules:
        spots = [i for i, s in enumerate(r.rhs) if s in nullable]
        variant = 0
        for drop in itertools.product((False, True), repeat=len(spots)):
            gone = {i for i, d in zip(spots, drop) if d}
            rhs = tuple(s for i, s in enumerate(r.rhs) if i not in gone)
            if not rhs or (r.lhs, rhs) in produced:
                continue
            produced.add((r.lhs, rhs))
            rid = r.id if not gone else f"{r.id}.e{variant}"
            variant += 1
            rules.append(GrammarRule(rid, r.lhs, rhs))
    return Grammar(g.name, "cf", g.nonterminals, g.terminals, g.start, tuple(rules),
                   notes=g.notes)


# -- brute-force oracle ----------------------------------------------------------


def _rewrites(rule: GrammarRule, form: tuple):
    k = len(rule.lhs)
    for i in range(len(form) - k + 1):
        if form[i:i + k] == rule.lhs:
            yield form[:i] + rule.rhs + form[i + k:]


def derive_grammar(g: Grammar, bounds: SearchBounds = SearchBounds()) -> EnumerationResult:
    """Terminal strings derivable from the start symbol within ``bounds``.

    Conditions are checked against the whole current sentential form.  Terminal
    symbols are never rewritten by any kind of grammar here, so forms holding
    more than ``max_terminal_len`` terminals are dropped as dead, not truncated.
    """
    L = bounds.max_terminal_len
    T = g.terminals
    start = (g.start,)
    seen = {start}
    found = set()
    queue = deque([(start, 0)])
    too_long = depth_cut = budget = False
    dead = 0
    depth = 0
    while queue:
        form, d = queue.popleft()
        depth = max(depth, d)
        if all(s in T for s in form):
            if len(form) <= L:
                found.add(form)
        for r in g.rules:
            if not all(is_subword(x, form) for x in r.permit):
                continue
            if any(is_subword(y, form) for y in r.forbid):
                continue
            for nxt in _rewrites(r, form):
                if nxt in seen:
                    continue
                if sum(1 for s in nxt if s in T) > L:
                    dead += 1
                    continue
                if len(nxt) > bounds.max_form_len:
                    too_long = True
                    continue
                if d == bounds.max_steps:
                    depth_cut = True
                    continue
                if len(seen) >= bounds.max_states:
                    budget = True
                    continue
                seen.add(nxt)
                queue.append((nxt, d + 1))
    return EnumerationResult(frozenset(found), not (too_long or depth_cut or budget),
                             states=len(seen), depth=depth, truncated_by_length=too_long,
                             truncated_by_depth=depth_cut, budget_hit=budget, dead_pruned=dead)

"""Symbols, strings, conditional insertion-deletion rules and systems.

Symbols are plain ``str`` tokens and strings over them are tuples of symbols;
the empty tuple is the empty word.  Decorated symbols (hats, bars, markers)
are encoded in the token itself, e.g. ``hat_A`` or ``dollar3_q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

Symbol = str
SymString = tuple  # tuple[Symbol, ...]

INS = "ins"
DEL = "del"

RESERVED = set("[](){}#")


class MalformedInput(ValueError):
    """Raised when a symbol, string or rule does not fit its alphabet or shape."""


def check_symbol(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise MalformedInput(f"symbol must be a non-empty string, got {name!r}")
    if any(ch.isspace() or ch in RESERVED for ch in name):
        raise MalformedInput(f"symbol {name!r} contains whitespace or a reserved character")
    return name


def word(*symbols: str) -> SymString:
    """Build a string from symbols; ``word("a b")`` splits on whitespace."""
    if len(symbols) == 1 and " " in symbols[0]:
        symbols = tuple(symbols[0].split())
    return tuple(check_symbol(s) for s in symbols)


def show(w: Iterable[str]) -> str:
    return "[" + " ".join(w) + "]"


def count(w: SymString, a: Symbol) -> int:
    """Number of occurrences of ``a`` in ``w``."""
    return sum(1 for s in w if s == a)


def is_subword(x: SymString, w: SymString) -> bool:
    """Contiguous subword test."""
    n, k = len(w), len(x)
    if k == 0:
        return True
    first = x[0]
    for i in range(n - k + 1):
        if w[i] == first and w[i:i + k] == x:
            return True
    return False


def _over(w: SymString, alphabet: frozenset, what: str) -> None:
    for s in w:
        if s not in alphabet:
            raise MalformedInput(f"symbol {s!r} in {what} is not in the alphabet")


@dataclass(frozen=True)
class ContextRule:
    """``(u, alpha, v)``: insertion rewrites uv -> u alpha v, deletion the reverse."""

    mode: str
    left: SymString
    body: SymString
    right: SymString

    def __post_init__(self):
        if self.mode not in (INS, DEL):
            raise MalformedInput(f"rule mode must be 'ins' or 'del', got {self.mode!r}")
        for part in ("left", "body", "right"):
            object.__setattr__(self, part, tuple(getattr(self, part)))
        if not self.body:
            raise MalformedInput("inserted/deleted string must be non-empty")


@dataclass(frozen=True)
class ConditionedRule:
    """A context rule guarded by permitting and forbidding subwords."""

    id: str
    base: ContextRule
    permit: frozenset = frozenset()
    forbid: frozenset = frozenset()

    def __post_init__(self):
        for part in ("permit", "forbid"):
            words = frozenset(tuple(x) for x in getattr(self, part))
            if any(len(x) == 0 for x in words):
                raise MalformedInput(f"rule {self.id}: condition words must be non-empty")
            object.__setattr__(self, part, words)

    @property
    def mode(self) -> str:
        return self.base.mode

    def symbols(self) -> set:
        out = set(self.base.left) | set(self.base.body) | set(self.base.right)
        for x in self.permit | self.forbid:
            out.update(x)
        return out


def ins(rule_id, body, left=(), right=(), permit=(), forbid=()) -> ConditionedRule:
    return ConditionedRule(rule_id, ContextRule(INS, tuple(left), tuple(body), tuple(right)),
                           frozenset(permit), frozenset(forbid))


def dele(rule_id, body, left=(), right=(), permit=(), forbid=()) -> ConditionedRule:
    return ConditionedRule(rule_id, ContextRule(DEL, tuple(left), tuple(body), tuple(right)),
                           frozenset(permit), frozenset(forbid))


class SizeVector(NamedTuple):
    n: int
    m: int
    m_prime: int
    p: int
    q: int
    q_prime: int

    @property
    def total(self) -> int:
        return sum(self)

    def __str__(self):
        return f"({self.n},{self.m},{self.m_prime};{self.p},{self.q},{self.q_prime})"


class Degree(NamedTuple):
    i: int
    j: int

    def __str__(self):
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class InsDelSystem:
    name: str
    alphabet: frozenset
    terminals: frozenset
    axioms: tuple
    rules: tuple
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(check_symbol(s) for s in self.alphabet))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "axioms", tuple(tuple(a) for a in self.axioms))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "notes", tuple(self.notes))
        if not self.terminals <= self.alphabet:
            extra = sorted(self.terminals - self.alphabet)
            raise MalformedInput(f"terminals not in alphabet: {extra}")
        if not self.axioms:
            raise MalformedInput("a system needs at least one axiom")
        for a in self.axioms:
            _over(a, self.alphabet, "axiom")
        seen = set()
        for r in self.rules:
            if r.id in seen:
                raise MalformedInput(f"duplicate rule id {r.id!r}")
            seen.add(r.id)
            for s in r.symbols():
                if s not in self.alphabet:
                    raise MalformedInput(f"rule {r.id}: symbol {s!r} is not in the alphabet")

    def rule(self, rule_id: str) -> ConditionedRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    @property
    def nonterminals(self) -> frozenset:
        return self.alphabet - self.terminals


def conditions_hold(rule: ConditionedRule, w: SymString, alphabet=None) -> bool:
    """True iff every permitting word occurs in ``w`` and no forbidding word does."""
    if alphabet is not None:
        _over(w, alphabet, "string")
    return (all(is_subword(x, w) for x in rule.permit)
            and not any(is_subword(y, w) for y in rule.forbid))


def sites(base: ContextRule, w: SymString) -> list:
    """Positions where ``base`` matches ``w``, ignoring conditions.

    A position counts the symbols strictly left of the insertion gap, or of the
    first deleted symbol.
    """
    u, a, v = base.left, base.body, base.right
    lu, la, lv = len(u), len(a), len(v)
    n = len(w)
    out = []
    if base.mode == INS:
        for i in range(lu, n - lv + 1):
            if w[i - lu:i] == u and w[i:i + lv] == v:
                out.append(i)
    else:
        for i in range(lu, n - la - lv + 1):
            if w[i:i + la] == a and w[i - lu:i] == u and w[i + la:i + la + lv] == v:
                out.append(i)
    return out


def apply_at(base: ContextRule, w: SymString, pos: int) -> SymString:
    if base.mode == INS:
        return w[:pos] + base.body + w[pos:]
    return w[:pos] + w[pos + len(base.body):]


def step(system: InsDelSystem, w: SymString) -> set:
    """All one-step successors of ``w`` as ``(rule_id, position, new_string)``."""
    w = tuple(w)
    _over(w, system.alphabet, "string")
    out = set()
    for r in system.rules:
        if not conditions_hold(r, w):
            continue
        for pos in sites(r.base, w):
            out.add((r.id, pos, apply_at(r.base, w, pos)))
    return out


def size_of(system: InsDelSystem) -> SizeVector:
    def top(mode, attr):
        return max((len(getattr(r.base, attr)) for r in system.rules if r.mode == mode), default=0)

    return SizeVector(top(INS, "body"), top(INS, "left"), top(INS, "right"),
                      top(DEL, "body"), top(DEL, "left"), top(DEL, "right"))


def degree_of(system: InsDelSystem) -> Degree:
    i = max((len(x) for r in system.rules for x in r.permit), default=0)
    j = max((len(y) for r in system.rules for y in r.forbid), default=0)
    return Degree(i, j)


def is_random_context(system: InsDelSystem) -> bool:
    d = degree_of(system)
    return d.i <= 1 and d.j <= 1

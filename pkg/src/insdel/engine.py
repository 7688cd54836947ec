"""Bounded derivation search, trace replay and insertion pumping."""

from __future__ import annotations

import enum
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .core import (DEL, INS, InsDelSystem, MalformedInput, SymString,
                   apply_at, is_subword, sites, show)


@dataclass(frozen=True)
class SearchBounds:
    max_terminal_len: int = 6
    max_form_len: int | None = None  # defaults to max_terminal_len + 8
    max_steps: int = 64
    max_states: int = 2_000_000

    def __post_init__(self):
        if self.max_form_len is None:
            object.__setattr__(self, "max_form_len", self.max_terminal_len + 8)
        for name in ("max_terminal_len", "max_form_len", "max_steps", "max_states"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.max_form_len < self.max_terminal_len:
            raise ValueError("max_form_len must be >= max_terminal_len")


@dataclass(frozen=True)
class Trace:
    system_name: str
    start: SymString
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(self.start))
        object.__setattr__(self, "steps", tuple((str(r), int(p)) for r, p in self.steps))


@dataclass(frozen=True)
class EnumerationResult:
    terminals: frozenset
    exhausted: bool
    states: int = 0
    depth: int = 0
    truncated_by_length: bool = False
    truncated_by_depth: bool = False
    budget_hit: bool = False
    dead_pruned: int = field(default=0, compare=False)
    assumption_pruned: int = field(default=0, compare=False)

    def sorted(self) -> list:
        return sorted(self.terminals, key=lambda w: (len(w), w))


class Membership(enum.Enum):
    DERIVABLE = "derivable"
    NOT_FOUND = "not-found-within-bounds"
    CERTIFIED_ABSENT = "certified-absent"


class ReplayError(Exception):
    """A trace step that is not a valid one-step derivation of the current form."""

    def __init__(self, index, rule_id, reason, form, missing_permit=(), present_forbid=(), note=""):
        self.index = index
        self.rule_id = rule_id
        self.reason = reason
        self.form = tuple(form)
        self.missing_permit = tuple(missing_permit)
        self.present_forbid = tuple(present_forbid)
        detail = f"step {index} ({rule_id}) failed: {reason} on {show(self.form)}"
        if self.missing_permit:
            detail += "; missing permitting " + ", ".join(show(x) for x in self.missing_permit)
        if self.present_forbid:
            detail += "; present forbidding " + ", ".join(show(x) for x in self.present_forbid)
        if note:
            detail += f" ({note})"
        super().__init__(detail)


class _Compiled:
    """The system re-encoded with one character per symbol.

    Forms become ``str`` so that slicing, hashing and subword tests run in C.
    Every distinct condition word is tested once per form; rules then gate on
    bit masks.
    """

    def __init__(self, system: InsDelSystem, max_terminal_len: int, single_of=None,
                 prune_dead: bool = True):
        symbols = sorted(system.alphabet)
        self.code = {s: chr(0x100 + i) for i, s in enumerate(symbols)}
        self.decode_map = {c: s for s, c in self.code.items()}
        words = sorted({w for r in system.rules for w in r.permit | r.forbid})
        self.words = [self.encode(w) for w in words]
        index = {w: i for i, w in enumerate(words)}
        self.rules = []
        for r in system.rules:
            pm = sum(1 << index[w] for w in r.permit)
            fm = sum(1 << index[w] for w in r.forbid)
            b = r.base
            self.rules.append((r.id, b.mode == INS, self.encode(b.left), self.encode(b.body),
                               self.encode(b.right), pm, fm))
        self.terminals = frozenset(self.code[s] for s in system.terminals)
        deletable = {s for r in system.rules if r.mode == DEL for s in r.base.body}
        undeletable = system.alphabet - deletable
        self.dead_symbols = frozenset(self.code[s] for s in undeletable - system.terminals)
        self.kept_terminals = tuple(self.code[s] for s in undeletable & system.terminals)
        self.max_terminal_len = max_terminal_len
        self.prune_dead = prune_dead
        self.single_of = frozenset(self.code[s] for s in single_of) if single_of else None

    def encode(self, w) -> str:
        return "".join(self.code[s] for s in w)

    def decode(self, s: str) -> SymString:
        return tuple(self.decode_map[c] for c in s)

    def is_terminal(self, s: str) -> bool:
        return self.terminals.issuperset(s)

    def dead(self, s: str) -> bool:
        # sound: undeletable nonterminals never leave, undeletable terminals never shrink
        if not self.prune_dead:
            return False
        if self.dead_symbols and not self.dead_symbols.isdisjoint(s):
            return True
        if self.kept_terminals:
            return sum(s.count(c) for c in self.kept_terminals) > self.max_terminal_len
        return False

    def successors(self, s: str):
        """Yield ``(successor, rule_index, position)``."""
        mask = 0
        for bit, w in enumerate(self.words):
            if w in s:
                mask |= 1 << bit
        n = len(s)
        for k, (_, is_ins, u, a, v, pm, fm) in enumerate(self.rules):
            if pm & mask != pm or fm & mask:
                continue
            lu, la, lv = len(u), len(a), len(v)
            if is_ins:
                if not lu and not lv:
                    for i in range(n + 1):
                        yield s[:i] + a + s[i:], k, i
                else:
                    for i in range(lu, n - lv + 1):
                        if s[i - lu:i] == u and s[i:i + lv] == v:
                            yield s[:i] + a + s[i:], k, i
            else:
                i = s.find(a, lu)
                while i != -1 and i + la + lv <= n:
                    if s[i - lu:i] == u and s[i + la:i + la + lv] == v:
                        yield s[:i] + s[i + la:], k, i
                    i = s.find(a, i + 1)


_WORKER: _Compiled | None = None


def _init_worker(compiled):
    global _WORKER
    _WORKER = compiled


def _expand(compiled: _Compiled, chunk, max_form_len):
    """Expand a slice of the frontier; returns candidates in deterministic order."""
    out = []
    local = set()
    too_long = False
    dead = 0
    assumed = 0
    single = compiled.single_of
    for s in chunk:
        for t, k, pos in compiled.successors(s):
            if t in local:
                continue
            local.add(t)
            if single is not None and sum(1 for c in t if c in single) >= 2:
                assumed += 1
                continue
            if compiled.dead(t):
                dead += 1
                continue
            if len(t) > max_form_len:
                too_long = True
                continue
            out.append((t, s, k, pos))
    return out, too_long, dead, assumed


def _expand_worker(chunk, max_form_len):
    return _expand(_WORKER, chunk, max_form_len)


@dataclass
class _Search:
    compiled: _Compiled
    seen: set
    terminals: set
    parents: dict | None
    result: EnumerationResult = field(default=None)


def _chunks(items, parts):
    size = max(1, -(-len(items) // parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _explore(system: InsDelSystem, bounds: SearchBounds, workers: int = 1,
             record_parents: bool = False, stop_at=None, single_of=None,
             prune_dead: bool = True) -> _Search:
    compiled = _Compiled(system, bounds.max_terminal_len, single_of, prune_dead)
    L = bounds.max_terminal_len
    parents = {} if record_parents else None
    seen = set()
    frontier = []
    terminals = set()
    for a in system.axioms:
        s = compiled.encode(a)
        if s not in seen:
            seen.add(s)
            frontier.append(s)
            if parents is not None:
                parents[s] = None
            if compiled.is_terminal(s) and len(s) <= L:
                terminals.add(s)
    target = compiled.encode(stop_at) if stop_at is not None else None
    too_long = depth_cut = budget = False
    dead = assumed = 0
    depth = 0
    pool = None
    if workers > 1:
        ctx = multiprocessing.get_context("fork")
        pool = ProcessPoolExecutor(workers, mp_context=ctx, initializer=_init_worker,
                                   initargs=(compiled,))
    try:
        while frontier and (target is None or target not in seen):
            if pool is not None and len(frontier) >= 4 * workers:
                parts = list(pool.map(_expand_worker, _chunks(frontier, 4 * workers),
                                      [bounds.max_form_len] * (4 * workers)))
            else:
                parts = [_expand(compiled, frontier, bounds.max_form_len)]
            if depth == bounds.max_steps:
                # probe only: anything new here is a derivation cut by the depth cap
                depth_cut = any(t not in seen for part in parts for t, *_ in part[0])
                too_long = too_long or any(p[1] for p in parts)
                break
            nxt = []
            for cands, long_flag, d, a in parts:
                too_long = too_long or long_flag
                dead += d
                assumed += a
                for t, parent, k, pos in cands:
                    if t in seen:
                        continue
                    if len(seen) >= bounds.max_states:
                        budget = True
                        break
                    seen.add(t)
                    nxt.append(t)
                    if parents is not None:
                        parents[t] = (parent, k, pos)
                    if len(t) <= L and compiled.is_terminal(t):
                        terminals.add(t)
                if budget:
                    break
            if budget:
                break
            frontier = nxt
            if frontier:
                depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    stopped_early = target is not None and target in seen and bool(frontier)
    exhausted = not (too_long or depth_cut or budget or stopped_early)
    search = _Search(compiled, seen, terminals, parents)
    search.result = EnumerationResult(
        terminals=frozenset(compiled.decode(t) for t in terminals),
        exhausted=exhausted, states=len(seen), depth=depth,
        truncated_by_length=too_long, truncated_by_depth=depth_cut, budget_hit=budget,
        dead_pruned=dead, assumption_pruned=assumed)
    return search


def enumerate_language(system: InsDelSystem, bounds: SearchBounds = SearchBounds(),
                       workers: int = 1, assume_single=None) -> EnumerationResult:
    """Terminal strings of length <= ``bounds.max_terminal_len`` reachable within bounds.

    ``assume_single`` is an optional set of symbols of which at most one may
    occur in a useful form; forms violating that are discarded.  It is only
    sound for systems that guarantee the property.
    """
    return _explore(system, bounds, workers, single_of=assume_single).result


def reachable_forms(system: InsDelSystem, bounds: SearchBounds = SearchBounds(),
                    workers: int = 1) -> frozenset:
    """Every sentential form reached within bounds, dead ends included."""
    search = _explore(system, bounds, workers, prune_dead=False)
    return frozenset(search.compiled.decode(s) for s in search.seen)


def find_trace(system: InsDelSystem, target, bounds: SearchBounds = SearchBounds(),
               start_axioms_only: bool = True) -> Trace | None:
    """A breadth-first derivation of ``target`` from some axiom, or None."""
    target = tuple(target)
    terminal = all(s in system.terminals for s in target)
    search = _explore(system, bounds, record_parents=True, stop_at=target, prune_dead=terminal)
    enc = search.compiled.encode(target)
    if enc not in search.seen:
        return None
    steps = []
    s = enc
    while search.parents[s] is not None:
        parent, k, pos = search.parents[s]
        steps.append((search.compiled.rules[k][0], pos))
        s = parent
    steps.reverse()
    return Trace(system.name, search.compiled.decode(s), tuple(steps))


def membership(system: InsDelSystem, w, bounds: SearchBounds = SearchBounds()) -> Membership:
    w = tuple(w)
    bad = [s for s in w if s not in system.terminals]
    if bad:
        raise MalformedInput(f"query contains non-terminal symbols: {bad}")
    if len(w) > bounds.max_terminal_len:
        bounds = replace(bounds, max_terminal_len=len(w),
                         max_form_len=max(bounds.max_form_len, len(w)))
    search = _explore(system, bounds, stop_at=w)
    if search.compiled.encode(w) in search.seen:
        return Membership.DERIVABLE
    if search.result.exhausted:
        return Membership.CERTIFIED_ABSENT
    return Membership.NOT_FOUND


def _check_step(system: InsDelSystem, w, index, rule_id, pos):
    try:
        rule = system.rule(rule_id)
    except KeyError:
        raise ReplayError(index, rule_id, "unknown-rule", w) from None
    missing = sorted(x for x in rule.permit if not is_subword(x, w))
    present = sorted(y for y in rule.forbid if is_subword(y, w))
    if missing or present:
        raise ReplayError(index, rule_id, "condition-gating", w, missing, present)
    if pos not in sites(rule.base, w):
        raise ReplayError(index, rule_id, "context-mismatch", w,
                          note=f"rule does not match at position {pos}")
    return apply_at(rule.base, w, pos)


def replay(system: InsDelSystem, trace: Trace, allow_any_start: bool = False) -> SymString:
    """Fold the trace steps over its start form; raises ReplayError on the first bad step."""
    w = trace.start
    if not allow_any_start and w not in system.axioms:
        raise ReplayError(-1, None, "start-not-axiom", w)
    bad = [s for s in w if s not in system.alphabet]
    if bad:
        raise MalformedInput(f"start form uses unknown symbols {bad}")
    for index, (rule_id, pos) in enumerate(trace.steps):
        w = _check_step(system, w, index, rule_id, pos)
    return w


def replay_forms(system: InsDelSystem, trace: Trace, allow_any_start: bool = False) -> list:
    """Every form along the trace, start included."""
    forms = [trace.start]
    if not allow_any_start and trace.start not in system.axioms:
        raise ReplayError(-1, None, "start-not-axiom", trace.start)
    for index, (rule_id, pos) in enumerate(trace.steps):
        forms.append(_check_step(system, forms[-1], index, rule_id, pos))
    return forms


def pump_insertion(system: InsDelSystem, trace: Trace, step_index: int, k: int,
                   allow_any_start: bool = False) -> Trace:
    """Repeat one insertion step ``k`` more times at the same site.

    The extra copies are inserted at the original gap, so every later position
    to the right of that gap moves by ``k * len(body)``.  The pumped trace is
    replayed before it is returned; a ReplayError means the pump broke a gate.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not 0 <= step_index < len(trace.steps):
        raise ValueError(f"step index {step_index} out of range")
    replay(system, trace, allow_any_start)
    rule_id, pos = trace.steps[step_index]
    rule = system.rule(rule_id)
    if rule.mode != INS:
        raise ValueError(f"step {step_index} uses deletion rule {rule_id}")
    shift = k * len(rule.base.body)
    tail = tuple((r, p + shift if p > pos else p) for r, p in trace.steps[step_index + 1:])
    steps = trace.steps[:step_index + 1] + ((rule_id, pos),) * k + tail
    pumped = Trace(trace.system_name, trace.start, steps)
    replay(system, pumped, allow_any_start)
    return pumped

"""Grammar-to-system compilers.

``compile_sc22``     random context grammar -> semi-conditional system of degree
                     (2,2) with context-free one-symbol insertion and deletion.
``compile_rc200``    grammar in special Geffert normal form -> random context
                     system of size (2,0,0;1,1,0).
``cf_approximation`` context-free one-symbol insertion system -> context-free
                     grammar without erasing rules.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import InsDelSystem, MalformedInput, SymString, dele, ins
from .grammar import Grammar, GrammarError, GrammarRule, eliminate_lambda, normalize_rc_rhs, \
    validate_sgnf

BEGIN = "Bmark"
END = "Emark"
HAT = "hat_"
BAR = "bar_"


class CollisionError(MalformedInput):
    """A generated symbol or rule id clashes with one from the input."""


@dataclass(frozen=True)
class GeneratedSymbol:
    """Descriptor of a construction-made symbol; ``str()`` renders its name."""

    family: str
    base: str
    index: int | None = None

    def __str__(self):
        if self.family in ("hat", "bar"):
            return f"{self.family}_{self.base}"
        if self.family == "terminator":
            return self.base
        if self.family == "W-chain":
            return f"W_{self.base}_{self.index}"
        if self.family == "sharp":
            return f"sharp{'p' * (self.index or 0)}_{self.base}"
        if self.family == "dollar":
            return f"dollar{self.index}_{self.base}"
        if self.family == "f":
            return f"f{'p' * (self.index or 0)}_{self.base}"
        if self.family == "split":
            return f"Xp_{self.base}"
        raise ValueError(f"unknown symbol family {self.family!r}")


def hat(x: str) -> str:
    return HAT + x


def bar(x: str) -> str:
    return BAR + x


def sharp(rule_id: str, primes: int = 0) -> str:
    return str(GeneratedSymbol("sharp", rule_id, primes))


def dollar(rule_id: str, i: int) -> str:
    return str(GeneratedSymbol("dollar", rule_id, i))


def f_mark(rule_id: str, primes: int = 0) -> str:
    return str(GeneratedSymbol("f", rule_id, primes))


def _singles(symbols) -> frozenset:
    return frozenset((s,) for s in symbols)


def _require_fresh(generated, existing, what):
    clash = set(generated) & set(existing)
    if clash:
        raise CollisionError(f"{what} collide with input symbols: {sorted(clash)}")


# -- coding and the normalization condition --------------------------------------


def normalization_condition(V, begin: str = BEGIN, end: str = END) -> frozenset:
    """Forbidden adjacencies that keep a string in the shape ``B (x^ y-)+ E``."""
    V = sorted(V)
    hats = [hat(x) for x in V]
    bars = [bar(x) for x in V]
    out = set()
    for x in hats:
        for y in hats:
            out.add((x, y))
    for x in bars:
        for y in bars:
            out.add((x, y))
    for x in V:
        out.add((begin, bar(x)))
        out.add((hat(x), end))
    for u in hats + bars:
        out.add((u, begin))
        out.add((end, u))
    return frozenset(out)


def encode_word(w, begin: str = BEGIN, end: str = END) -> SymString:
    out = [begin]
    for a in w:
        out += [hat(a), bar(a)]
    out.append(end)
    return tuple(out)


def decode_word(w) -> SymString:
    out = []
    for s in w:
        if not s.startswith(HAT):
            raise MalformedInput(f"{s!r} is not a hatted symbol")
        out.append(s[len(HAT):])
    return tuple(out)


# -- semi-conditional construction -------------------------------------------------


@dataclass(frozen=True)
class Sc22Artifacts:
    normalized: Grammar
    hats: dict
    bars: dict
    begin: str
    end: str
    q_n: frozenset
    q_sharp: frozenset
    q_dollar: frozenset
    terminals: frozenset
    alphabet: frozenset


def build_sc22(g: Grammar):
    """Compile a random context grammar; returns ``(system, artifacts)``."""
    if g.kind != "rc":
        raise GrammarError(f"compile_sc22 needs an rc grammar, got kind {g.kind!r}")
    norm = normalize_rc_rhs(g)
    V = sorted(norm.alphabet)
    T = norm.terminals
    B, E = BEGIN, END
    hats = {x: hat(x) for x in V}
    bars = {x: bar(x) for x in V}
    erasing = [r for r in norm.rules if not r.rhs]
    binary = [r for r in norm.rules if r.rhs]
    q_sharp = frozenset(sharp(r.id) for r in erasing)
    q_dollar = frozenset(dollar(r.id, i) for r in binary for i in range(1, 6))
    t_gamma = frozenset(hats[a] for a in T)
    alphabet = frozenset(hats.values()) | frozenset(bars.values()) | q_sharp | q_dollar | {B, E}
    _require_fresh(alphabet, norm.alphabet, "generated symbols")
    QN = normalization_condition(V, B, E)
    markers = _singles(q_sharp | q_dollar)

    def cond(words):
        return frozenset((hats[x[0]],) for x in words)

    rules = []
    for r in erasing:
        p = r.id
        X, Xh, Xb, h = r.lhs[0], hats[r.lhs[0]], bars[r.lhs[0]], sharp(r.id)
        rules += [
            ins(f"{p}.1", [h], permit={(Xh, Xb)} | cond(r.permit),
                forbid=markers | cond(r.forbid) | QN),
            dele(f"{p}.2", [Xh], permit={(h, Xh)}, forbid=QN),
            dele(f"{p}.3", [Xb], permit={(h, Xb)}, forbid={(Xh, h)} | QN),
            dele(f"{p}.4", [h], forbid=QN),
        ]
    for r in binary:
        q = r.id
        Xh, Xb = hats[r.lhs[0]], bars[r.lhs[0]]
        Yh, Yb = hats[r.rhs[0]], bars[r.rhs[0]]
        Zh, Zb = hats[r.rhs[1]], bars[r.rhs[1]]
        d1, d2, d3, d4, d5 = (dollar(q, i) for i in range(1, 6))
        rules += [
            ins(f"{q}.1", [d1], permit={(Xh, Xb)} | cond(r.permit),
                forbid=markers | cond(r.forbid) | QN),
            ins(f"{q}.2", [d2], permit={(d1, Xh)}, forbid={(d2,)} | QN),
            dele(f"{q}.3", [Xh], permit={(d1, Xh), (Xb, d2)}, forbid=QN),
            ins(f"{q}.4", [d3], permit={(d1, Xb)}, forbid={(d2, Xb), (d3,), (Xh, d1)} | QN),
            dele(f"{q}.5", [d1], permit={(d3, d1)}, forbid=QN),
            dele(f"{q}.6", [Xb], permit={(d3, Xb)}, forbid={(d1,)} | QN),
            ins(f"{q}.7", [d4], permit={(d3, d2)}, forbid={(d1,), (d4,)} | QN),
            dele(f"{q}.8", [d2], permit={(d4, d3)}, forbid=QN),
            ins(f"{q}.9", [d5], permit={(d4,)}, forbid={(d2,), (d5,), (Xh, d4)} | QN),
            ins(f"{q}.10", [Yh], permit={(d4, d3), (d3, d5)}, forbid={(Yh, d4)} | QN),
            ins(f"{q}.11", [Yb], permit={(d4, Yh), (Yh, d3), (d3, d5)},
                forbid={(d5, Yb)} | QN),
            ins(f"{q}.12", [Zh], permit={(d4, Yh), (Yb, d3), (d3, d5)},
                forbid={(Zh, d4)} | QN),
            ins(f"{q}.13", [Zb], permit={(d4, Yh), (Yb, d3), (d3, Zh), (Zh, d5)},
                forbid={(d5, Zb)} | QN),
            dele(f"{q}.14", [d3], permit={(d4, Yh), (Yb, d3), (d3, Zh), (Zb, d5)}, forbid=QN),
            dele(f"{q}.15", [d4], permit={(d4, Yh), (Zb, d5)}, forbid={(d3,)} | QN),
            dele(f"{q}.16", [d5], forbid={(d3,), (d4,)} | QN),
        ]
    keep = {B, E} | {hats[a] for a in T} | {bars[a] for a in T}
    rules.append(dele("clean.B", [B], forbid=_singles(alphabet - keep)))
    rules.append(dele("clean.E", [E], forbid={(B,)}))
    for a in sorted(T):
        rules.append(dele(f"clean.{bars[a]}", [bars[a]], forbid={(B,), (E,)}))
    notes = (f"source: {g.name} (kind {g.kind})", "construction: sc22")
    system = InsDelSystem(f"{g.name}_sc22", alphabet, t_gamma,
                          (encode_word([norm.start], B, E),), tuple(rules), notes)
    art = Sc22Artifacts(norm, hats, bars, B, E, QN, q_sharp, q_dollar, t_gamma, alphabet)
    return system, art


def compile_sc22(g: Grammar) -> InsDelSystem:
    return build_sc22(g)[0]


# -- random context construction ---------------------------------------------------


@dataclass(frozen=True)
class Rc200Artifacts:
    nprime: frozenset       # N' including split intermediates
    letters: frozenset      # hatted and barred A, B, C, D
    service: frozenset      # the #, $ and f families
    splits: dict            # rule id -> intermediate symbol

    @property
    def n_gamma(self) -> frozenset:
        return self.letters | self.service


def _linear_shape(g: Grammar, r: GrammarRule):
    """Classify an SGNF rule; returns (shape, X, Y, c)."""
    if len(r.lhs) == 2:
        return "erase2", None, None, None
    X = r.lhs[0]
    if not r.rhs:
        return "sprime", X, None, None
    first, second = r.rhs
    if second in g.nprime and first not in g.nprime:
        return ("left-n2" if first in g.ndouble else "left-t"), X, second, first
    return ("right-n2" if second in g.ndouble else "right-t"), X, first, second


def build_rc200(g: Grammar):
    """Compile a grammar in special Geffert normal form; returns ``(system, artifacts)``."""
    if g.kind != "sgnf":
        raise GrammarError(f"compile_rc200 needs an sgnf grammar, got kind {g.kind!r}")
    report = validate_sgnf(g, allow_terminal_prefix=True)
    if not report.valid:
        raise GrammarError("not in special Geffert normal form: " +
                           "; ".join(f"{rid}: {why}" for rid, why in report.violations))
    T = g.terminals
    letters = frozenset(f(x) for x in ("A", "B", "C", "D") for f in (hat, bar))
    splits = {r.id: str(GeneratedSymbol("split", r.id)) for r in g.rules
              if _linear_shape(g, r)[0] in ("left-n2", "right-n2")}
    nprime = g.nprime | frozenset(splits.values())
    service = set()
    for r in g.rules:
        shape = _linear_shape(g, r)[0]
        if shape == "right-t":
            service |= {sharp(r.id), sharp(r.id, 1)}
        elif shape == "right-n2":
            service |= {sharp(r.id), sharp(r.id, 1), sharp(r.id + "'"), sharp(r.id + "'", 1)}
        elif shape == "erase2":
            service |= {dollar(r.id, i) for i in range(1, 6)} | {f_mark(r.id), f_mark(r.id, 1)}
    service = frozenset(service)
    _require_fresh(letters | service | set(splits.values()), g.alphabet, "generated symbols")
    guards = nprime | service

    def left_insert(rid, X, c, Y):
        # X -> cY: insert cY anywhere, then Y deletes the X right of it
        return [ins(f"{rid}.1", [c, Y], permit={(X,)}, forbid=_singles(guards - {X})),
                dele(f"{rid}.2", [X], left=[Y])]

    def right_insert(rid, X, Y, c):
        # X -> Yc: mark X's site with #q #'q, then fill Yc between the markers
        h, hp = sharp(rid), sharp(rid, 1)
        return [ins(f"{rid}.1", [h, hp], permit={(X,)}, forbid=_singles(guards - {X})),
                dele(f"{rid}.2", [X], left=[hp]),
                ins(f"{rid}.3", [Y, c], permit={(h,)}, forbid={(X,), (Y,)}),
                dele(f"{rid}.4", [hp], left=[c]),
                dele(f"{rid}.5", [h], forbid={(hp,)})]

    rules = []
    for r in g.rules:
        shape, X, Y, c = _linear_shape(g, r)
        if shape == "left-t":
            rules += left_insert(r.id, X, c, Y)
        elif shape == "left-n2":
            Xp = splits[r.id]
            rules += left_insert(r.id, X, hat(c), Xp)
            rules += left_insert(r.id + "'", Xp, bar(c), Y)
        elif shape == "right-t":
            rules += right_insert(r.id, X, Y, c)
        elif shape == "right-n2":
            Xp = splits[r.id]
            rules += right_insert(r.id, X, Xp, bar(c))
            rules += right_insert(r.id + "'", Xp, Y, hat(c))
        elif shape == "sprime":
            rules.append(dele(f"{r.id}.1", [X], forbid=_singles(guards - {X})))
        else:
            rules += _erasing_group(r.id, r.lhs[0], r.lhs[1], service,
                                    g.alphabet | letters | service | frozenset(splits.values()), T)
    alphabet = g.alphabet | letters | service | frozenset(splits.values())
    notes = (f"source: {g.name} (kind {g.kind})", "construction: rc200")
    if any(_linear_shape(g, r)[0] == "sprime" for r in g.rules):
        notes += ("extension: S' -> λ emitted as an unconditional-site deletion of S' "
                  "guarded like the linear-rule insertions",)
    system = InsDelSystem(f"{g.name}_rc200", alphabet, T, ((g.start,),), tuple(rules), notes)
    return system, Rc200Artifacts(nprime, letters, service, splits)


def _erasing_group(r, U, V, service, alphabet, T):
    Uh, Ub, Vh, Vb = hat(U), bar(U), hat(V), bar(V)
    s1, s2, s3, s4, s5 = (dollar(r, i) for i in range(1, 6))
    f, fp = f_mark(r), f_mark(r, 1)
    return [
        ins(f"{r}.1", [s1, s2], forbid=_singles(service)),
        dele(f"{r}.2", [s1], left=[Uh]),
        ins(f"{r}.3", [s3], permit={(s2,)}, forbid={(s1,), (s3,), (s4,)}),
        dele(f"{r}.4", [s2], left=[s3]),
        dele(f"{r}.5", [Ub], left=[s3], forbid={(s2,)}),
        ins(f"{r}.6", [s4], permit={(s3,)}, forbid={(s2,), (s4,)}),
        dele(f"{r}.7", [s3], left=[s4]),
        dele(f"{r}.8", [Vh], left=[s4], forbid={(s3,)}),
        dele(f"{r}.9", [hat("A")], left=[s4], forbid={(s3,)}),
        dele(f"{r}.10", [hat("C")], left=[s4], forbid={(s3,)}),
        ins(f"{r}.11", [f, fp], permit={(s4,)}, forbid={(s3,), (fp,)}),
        dele(f"{r}.12", [f], left=[Vb]),
        ins(f"{r}.13", [s5], permit={(fp,)}, forbid={(f,), (s5,)}),
        dele(f"{r}.14", [s4], left=[s5]),
        dele(f"{r}.15", [Vb], left=[s5], forbid={(s4,)}),
        dele(f"{r}.16", [fp], left=[s5], forbid={(s4,)}),
        dele(f"{r}.17", [s5], forbid={(fp,)}),
        dele(f"{r}.18", [Uh], forbid=_singles(alphabet - T - {hat("A"), hat("C")})),
    ]


def compile_rc200(g: Grammar) -> InsDelSystem:
    return build_rc200(g)[0]


# -- context-free approximation ----------------------------------------------------


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def cf_approximation(system: InsDelSystem, eliminate: bool = True) -> Grammar:
    """Context-free grammar for a system of context-free one-symbol insertions.

    Conditions on the rules are ignored, so for conditional systems the grammar
    over-approximates.  Axioms or inserted symbols that are not terminal can
    never be removed (there are no deletions) and are dropped.
    """
    for r in system.rules:
        if r.mode != "ins" or len(r.base.body) != 1 or r.base.left or r.base.right:
            raise MalformedInput(f"rule {r.id}: only context-free one-symbol insertions "
                                 "are allowed")
    T = system.terminals
    S = _fresh("S", T)
    S0 = _fresh("S0", T | {S})
    axioms = sorted(a for a in system.axioms if set(a) <= T)
    if any(not a for a in axioms):
        raise MalformedInput("the empty axiom puts λ in the language; λ-elimination would drop it")
    insertable = sorted({r.base.body[0] for r in system.rules} & T)
    rules = []
    for k, a in enumerate(axioms):
        rhs = [S]
        for x in a:
            rhs += [x, S]
        rules.append(GrammarRule(f"ax{k}", (S0,), tuple(rhs)))
    for x in insertable:
        rules.append(GrammarRule(f"ins_{x}", (S,), (S, x, S)))
    rules.append(GrammarRule("lam", (S,), ()))
    notes = [f"source: {system.name}", "construction: cf-approx"]
    if any(r.permit or r.forbid for r in system.rules):
        notes.append("conditions ignored: the grammar over-approximates the system")
    g = Grammar(f"{system.name}_cf", "cf", {S, S0}, T, S0, tuple(rules), notes=tuple(notes))
    return eliminate_lambda(g) if eliminate else g

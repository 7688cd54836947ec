"""Command-line entry points: check, enumerate, compile, compare, replay, pump.

Exit status is 0 on success, 1 when a comparison is not ``equal`` or a trace
fails to replay, and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .construct import cf_approximation, compile_rc200, compile_sc22
from .core import MalformedInput, degree_of, show, size_of
from .engine import ReplayError, SearchBounds, enumerate_language, pump_insertion, replay
from .formats import (ParseError, file_kind, parse_grammar, parse_system, parse_trace,
                      render_grammar, render_system, render_trace)
from .grammar import derive_grammar, validate_sgnf
from .verify import AlphabetMorphism, compare_languages

OK, FAILED, USAGE = 0, 1, 2

COMPILERS = {"sc22": compile_sc22, "rc200": compile_rc200}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}") from None


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise MalformedInput(f"cannot read {path}: {err.strerror}") from None


def _load(path):
    text = _read(path)
    kind = file_kind(text)
    if kind == "system":
        return kind, parse_system(text)
    if kind == "grammar":
        return kind, parse_grammar(text)
    return kind, parse_trace(text)


def _load_as(path, wanted):
    kind, obj = _load(path)
    if kind != wanted:
        raise MalformedInput(f"{path} holds a {kind}, expected a {wanted}")
    return obj


def _bounds(args):
    return SearchBounds(max_terminal_len=args.max_len, max_form_len=args.max_form_len,
                        max_steps=args.max_steps, max_states=args.max_states)


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args):
    kind, obj = _load(args.file)
    if kind == "system":
        print(f"system {obj.name}: {len(obj.alphabet)} symbols, {len(obj.terminals)} terminals, "
              f"{len(obj.axioms)} axioms, {len(obj.rules)} rules")
        print(f"size {size_of(obj)}  degree {degree_of(obj)}")
    elif kind == "grammar":
        print(f"grammar {obj.name} ({obj.kind}): {len(obj.nonterminals)} nonterminals, "
              f"{len(obj.terminals)} terminals, {len(obj.rules)} rules")
        if obj.kind == "sgnf":
            report = validate_sgnf(obj)
            for rid, why in report.violations:
                print(f"violation {rid}: {why}")
            print("SGNF valid" if report.valid else "SGNF invalid")
            return OK if report.valid else FAILED
    else:
        print(f"trace for {obj.system_name}: start {show(obj.start)}, {len(obj.steps)} steps")
    return OK


def cmd_enumerate(args):
    kind, obj = _load(args.file)
    bounds = _bounds(args)
    if kind == "system":
        single = set(args.assume_single_nprime.split(",")) if args.assume_single_nprime else None
        result = enumerate_language(obj, bounds, args.workers, assume_single=single)
    elif kind == "grammar":
        result = derive_grammar(obj, bounds)
    else:
        raise MalformedInput("cannot enumerate a trace file")
    for w in result.sorted():
        print(show(w))
    print(f"EXHAUSTED {str(result.exhausted).lower()}")
    if args.stats:
        print(f"# states {result.states}, depth {result.depth}", file=sys.stderr)
    return OK


def cmd_compile(args):
    kind, obj = _load(args.file)
    if args.construction == "cf-approx":
        if kind != "system":
            raise MalformedInput("cf-approx takes an insertion-deletion system")
        g = cf_approximation(obj)
        header = [f"source: {args.file}", "construction: cf-approx"]
        _emit(render_grammar(g, header), args.output)
        return OK
    if kind != "grammar":
        raise MalformedInput(f"{args.construction} takes a grammar")
    system = COMPILERS[args.construction](obj)
    header = [f"source: {args.file}", f"construction: {args.construction}",
              f"size: {size_of(system)}", f"degree: {degree_of(system)}"]
    _emit(render_system(system, header), args.output)
    return OK


def _morphism(args, system):
    if args.map_file:
        mapping = {}
        for n, line in enumerate(_read(args.map_file).splitlines(), 1):
            line = line.split("#", 1)[0].split()
            if not line:
                continue
            if len(line) != 2:
                raise ParseError("map lines look like 'from to'", n)
            mapping[line[0]] = line[1]
        return AlphabetMorphism(mapping)
    if args.map == "unhat":
        return AlphabetMorphism.unhat(system.terminals)
    return AlphabetMorphism.identity()


def cmd_compare(args):
    g = _load_as(args.grammar, "grammar")
    system = _load_as(args.system, "system")
    report = compare_languages(system, g, _morphism(args, system), _bounds(args), args.workers)
    print("\n".join(report.lines()))
    if args.verbose:
        print(report.text(), file=sys.stderr)
    return OK if report.verdict == "equal" else FAILED


def _replay_failure(err):
    print(f"replay failed: {err}")
    return FAILED


def cmd_replay(args):
    system = _load_as(args.system, "system")
    trace = _load_as(args.trace, "trace")
    try:
        final = replay(system, trace, args.any_start)
    except ReplayError as err:
        return _replay_failure(err)
    print(show(final))
    return OK


def cmd_pump(args):
    system = _load_as(args.system, "system")
    trace = _load_as(args.trace, "trace")
    try:
        pumped = pump_insertion(system, trace, args.step, args.k, args.any_start)
    except ReplayError as err:
        return _replay_failure(err)
    except (ValueError, KeyError) as err:
        raise MalformedInput(str(err)) from None
    sys.stdout.write(render_trace(pumped))
    print(f"# final {show(replay(system, pumped, args.any_start))}")
    return OK


def build_parser():
    parser = _Parser(prog="insdel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def bounded(p):
        p.add_argument("--max-len", type=int, default=6, help="terminal length cap")
        p.add_argument("--max-form-len", type=int, default=None,
                       help="sentential form length cap (default max-len + 8)")
        p.add_argument("--max-steps", type=int, default=64, help="derivation depth cap")
        p.add_argument("--max-states", type=int, default=2_000_000, help="state budget")
        p.add_argument("--workers", type=int, default=1, help="parallel expansion workers")

    p = sub.add_parser("check", help="parse and validate a file")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("enumerate", help="bounded language of a system or grammar")
    p.add_argument("file")
    bounded(p)
    p.add_argument("--assume-single-nprime", metavar="SYMS",
                   help="comma-separated symbols of which useful forms hold at most one")
    p.add_argument("--stats", action="store_true", help="report search statistics on stderr")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("compile", help="compile a grammar (or approximate a system)")
    p.add_argument("file")
    p.add_argument("--construction", required=True, choices=["sc22", "rc200", "cf-approx"])
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(run=cmd_compile)

    p = sub.add_parser("compare", help="compare a grammar with a compiled system")
    p.add_argument("grammar")
    p.add_argument("system")
    p.add_argument("--map", choices=["unhat", "identity"], default="identity")
    p.add_argument("--map-file", help="custom morphism, one 'from to' pair per line")
    p.add_argument("-v", "--verbose", action="store_true")
    bounded(p)
    p.set_defaults(run=cmd_compare)

    for name, helptext, run in (("replay", "replay a derivation trace", cmd_replay),
                                ("pump", "repeat an insertion step of a trace", cmd_pump)):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("system")
        p.add_argument("trace")
        p.add_argument("--any-start", action="store_true",
                       help="allow traces that start from a non-axiom form")
        if name == "pump":
            p.add_argument("--step", type=int, required=True)
            p.add_argument("--k", type=int, required=True)
        p.set_defaults(run=run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return USAGE
        return OK if exc.code in (0, None) else USAGE
    try:
        return args.run(args)
    except (MalformedInput, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

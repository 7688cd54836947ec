"""Replay the hand-written simulation sequences against the compiled rule sets.

Each sequence is paired with a corrupted twin (two steps swapped).  The twin
must be stopped by a condition or a context at a known step, which shows the
gating is doing real work rather than letting any order through.
"""

from insdel import ReplayError, check_golden_traces, golden_suite, replay

suite = golden_suite()
for g, result in zip(suite, check_golden_traces(suite)):
    status = "ok " if result.passed else "BAD"
    kind = "must fail" if g.fail_at is not None else f"{len(g.trace.steps)} steps"
    print(f"[{status}] {g.name:<32} {kind:<10} {result.message}")

print()
bad = next(g for g in suite if g.name == "sc22 p with p.4 before p.3")
try:
    replay(bad.system, bad.trace, allow_any_start=True)
except ReplayError as err:
    print("diagnosis for the corrupted erasing sequence:")
    print(" ", err)

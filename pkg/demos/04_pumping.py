"""Pump a one-symbol insertion to escape the language (ab)+.

The toy system starts from "ab" and may insert a after b, or b after a.  The
derivation ab => aba => abab stays inside (ab)+, but nothing stops the last
insertion from firing again at the same spot.
"""

from insdel import pump_insertion, replay, show
from insdel.verify import gamma_ab, gamma_ab_trace, in_ab_plus, pump_falsification

system, trace = gamma_ab(), gamma_ab_trace()
print("original:", show(replay(system, trace)))
for k in range(1, 4):
    pumped = pump_insertion(system, trace, step_index=1, k=k)
    w = replay(system, pumped)
    print(f"pumped k={k}: {show(w):<20} in (ab)+: {in_ab_plus(w)}")

outcome = pump_falsification(k=1, cap=5)
outside = sorted(outcome.enumerated_outside, key=lambda w: (len(w), w))
print(f"\n{len(outside)} strings of length <= 5 lie outside (ab)+, e.g.",
      ", ".join(show(w) for w in outside[:4]))

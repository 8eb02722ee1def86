"""Walk through the move classes on a ring of length 4.

Prints every state, its transitions, and the bookkeeping deltas so you
can see the balance delta_peak + delta_diamond + delta_tiles = 1 hold
move by move.
"""

from raisepeel.profiles import enumerate_states, in_omega_global, transitions

states = enumerate_states(4)
print(f"{len(states)} states on the length-4 ring\n")

for h in states:
    tag = "  <- can trigger a wrapping avalanche" if in_omega_global(h) else ""
    print(f"state {h}{tag}")
    for rec in transitions(h):
        balance = rec.delta_peak + rec.delta_diamond + rec.delta_tiles
        print(f"  site {rec.site}: {rec.move_class.value:16s} -> {rec.target}"
              f"   dPeak={rec.delta_peak} dDiamond={rec.delta_diamond}"
              f" dGlobal={rec.delta_global} dTiles={rec.delta_tiles:+d}"
              f"   (sum {balance})")
    print()

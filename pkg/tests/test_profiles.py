"""State space, move classification, and single-event bookkeeping.

The move oracles below were worked out by hand; the exhaustive
suites then push the same invariants across every state and site for
rings up to length 10.
"""

from math import comb

import pytest

from raisepeel.profiles import (
    EventCounters,
    MoveClass,
    TransitionRecord,
    apply_move,
    check_profile,
    classify_move,
    count_peaks,
    enumerate_states,
    in_omega_global,
    local_minima,
    substrate,
    tile_count,
    transitions,
)

LENGTHS = (2, 4, 6, 8, 10)

# states of the length-4 ring in lexicographic order
L4_STATES = (
    (0, 1, 0, 1),
    (0, 1, 2, 1),
    (2, 1, 0, 1),
    (2, 1, 2, 1),
    (2, 1, 2, 3),
    (2, 3, 2, 1),
)


def test_substrate_and_validation():
    assert substrate(4) == (0, 1, 0, 1)
    assert substrate(8) == (0, 1, 0, 1, 0, 1, 0, 1)
    check_profile(substrate(6))
    check_profile((2, 1, 2, 3))


@pytest.mark.parametrize("bad", [
    (0, 1, 0),            # odd length
    (0, -1, 0, 1),        # negative height
    (1, 0, 1, 0),         # parity broken
    (0, 1, 0, 3),         # step of size 3
    (2, 3, 2, 3),         # detached from the bottom (minimum 2)
])
def test_check_profile_rejects(bad):
    with pytest.raises(ValueError):
        check_profile(bad)


def test_state_counts():
    # central binomial coefficients C(L, L/2)
    for length in LENGTHS:
        states = enumerate_states(length)
        assert len(states) == comb(length, length // 2)
    assert len(enumerate_states(2)) == 2
    assert len(enumerate_states(8)) == 70


def test_l4_states_frozen():
    assert enumerate_states(4) == L4_STATES


def test_enumeration_against_brute_force_l6():
    # independent oracle: all cyclic walks with +-1 steps, the parity
    # anchor, nonnegative heights, and minimum at most 1
    found = set()
    for h0 in range(0, 7, 2):
        stack = [(h0,)]
        while stack:
            prefix = stack.pop()
            if len(prefix) == 6:
                if abs(prefix[-1] - h0) == 1 and min(prefix) <= 1:
                    found.add(prefix)
                continue
            for step in (-1, 1):
                nxt = prefix[-1] + step
                if nxt >= 0:
                    stack.append(prefix + (nxt,))
    assert found == set(enumerate_states(6))


def test_classify_moves_on_l4():
    assert classify_move((0, 1, 0, 1), 0) == MoveClass.ADSORPTION
    assert classify_move((0, 1, 0, 1), 1) == MoveClass.REFLECTION
    assert classify_move((2, 1, 2, 1), 0) == MoveClass.REFLECTION
    assert classify_move((2, 1, 2, 1), 1) == MoveClass.ADSORPTION
    assert classify_move((2, 1, 2, 3), 1) == MoveClass.GLOBAL_AVALANCHE
    assert classify_move((2, 1, 2, 3), 3) == MoveClass.REFLECTION
    # slope sites of (2,1,2,3) launch local avalanches
    assert classify_move((2, 1, 2, 3), 0) == MoveClass.LOCAL_AVALANCHE
    assert classify_move((2, 1, 2, 3), 2) == MoveClass.LOCAL_AVALANCHE


def test_adsorption_move():
    rec = apply_move((0, 1, 2, 1), 0)
    assert rec.move_class == MoveClass.ADSORPTION
    assert rec.target == (2, 1, 2, 1)
    assert (rec.delta_peak, rec.delta_diamond, rec.delta_global, rec.delta_tiles) == (0, 0, 0, 1)


def test_reflection_move():
    rec = apply_move((2, 1, 2, 3), 3)
    assert rec.move_class == MoveClass.REFLECTION
    assert rec.target == (2, 1, 2, 3)
    assert (rec.delta_peak, rec.delta_diamond, rec.delta_global, rec.delta_tiles) == (1, 0, 0, 0)


def test_global_avalanche_move():
    # the unique level-1 valley of (2,1,2,3); raising it fills the ring
    # to minimum 2 and both layers peel off
    rec = apply_move((2, 1, 2, 3), 1)
    assert rec.move_class == MoveClass.GLOBAL_AVALANCHE
    assert rec.target == (0, 1, 0, 1)
    assert rec.delta_global == 1
    assert rec.delta_diamond == 4
    assert rec.delta_tiles == -3
    assert rec.delta_peak == 0


def test_local_avalanche_rightward():
    # ascending slope at site 0 of (2,3,2,1,0,1): the matching height 2
    # reappears at site 2, so only site 1 is peeled
    rec = apply_move((2, 3, 2, 1, 0, 1), 0)
    assert rec.move_class == MoveClass.LOCAL_AVALANCHE
    assert rec.target == (2, 1, 2, 1, 0, 1)
    assert rec.delta_diamond == 2
    assert rec.delta_tiles == -1


def test_local_avalanche_leftward():
    # descending slope at site 3 of (2,3,2,1,0,1): scanning left, height 1
    # reappears at site 5 (cyclically), peeling sites 0, 1, 2
    rec = apply_move((2, 3, 2, 1, 0, 1), 3)
    assert rec.move_class == MoveClass.LOCAL_AVALANCHE
    assert rec.target == (0, 1, 0, 1, 0, 1)
    assert rec.delta_diamond == 4
    assert rec.delta_tiles == -3


def test_tile_count_and_peaks():
    assert tile_count((0, 1, 0, 1)) == 0
    assert tile_count((2, 1, 2, 3)) == 3
    assert count_peaks((0, 1, 0, 1)) == 2
    assert count_peaks((2, 1, 2, 3)) == 1
    assert count_peaks((0, 1)) == 1
    assert local_minima((2, 1, 2, 3)) == [1]


def test_omega_window_examples():
    assert in_omega_global((2, 1, 2, 3))
    assert not in_omega_global((0, 1, 0, 1))      # level-0 valleys exist
    assert not in_omega_global((2, 1, 2, 1))      # two level-1 valleys
    assert in_omega_global((2, 1))


def test_transition_records_shape():
    recs = transitions((2, 1, 2, 3))
    assert len(recs) == 4
    assert all(isinstance(r, TransitionRecord) for r in recs)
    assert [r.site for r in recs] == [0, 1, 2, 3]
    d = recs[1].as_json_dict()
    assert d["class"] == MoveClass.GLOBAL_AVALANCHE.value
    assert d["dDiamond"] == 4


def test_event_counters():
    c = EventCounters(0, 0, 0, 0, 0)
    c = c.advanced(apply_move((0, 1, 0, 1), 0))       # adsorption
    c = c.advanced(apply_move((2, 1, 0, 1), 2))       # adsorption
    assert c.n_total == 2
    assert c.n_tiles == 2
    assert c.balanced
    d = c.as_json_dict()
    assert d["n_total"] == 2


# ---------------------------------------------------------------------------
# exhaustive structural suites


@pytest.mark.parametrize("length", LENGTHS)
def test_closure_and_balance_exhaustive(length):
    states = set(enumerate_states(length))
    for h in states:
        for rec in transitions(h):
            assert rec.target in states
            assert rec.delta_peak + rec.delta_diamond + rec.delta_tiles == 1
            assert tile_count(rec.target) == tile_count(h) + rec.delta_tiles
            if rec.move_class == MoveClass.LOCAL_AVALANCHE:
                assert rec.delta_diamond >= 2
            if rec.move_class == MoveClass.GLOBAL_AVALANCHE:
                assert rec.delta_global == 1
                assert rec.delta_diamond == length
            else:
                assert rec.delta_global == 0


@pytest.mark.parametrize("length", LENGTHS)
def test_trigger_equivalence_exhaustive(length):
    # a full two-layer removal is possible exactly on the states with no
    # level-0 valley and a single level-1 valley, and then from exactly
    # one site
    for h in enumerate_states(length):
        globals_from = [r.site for r in transitions(h)
                        if r.move_class == MoveClass.GLOBAL_AVALANCHE]
        if in_omega_global(h):
            assert len(globals_from) == 1
        else:
            assert globals_from == []


@pytest.mark.parametrize("length", LENGTHS)
def test_peak_reflection_correspondence(length):
    for h in enumerate_states(length):
        reflections = [r for r in transitions(h)
                       if r.move_class == MoveClass.REFLECTION]
        assert len(reflections) == count_peaks(h)
        assert all(r.target == h and r.delta_peak == 1 for r in reflections)


@pytest.mark.parametrize("length", LENGTHS)
def test_irreducibility_exhaustive(length):
    states = enumerate_states(length)
    index = {s: k for k, s in enumerate(states)}
    forward = [set() for _ in states]
    backward = [set() for _ in states]
    for s in states:
        for rec in transitions(s):
            if rec.target != s:
                forward[index[s]].add(index[rec.target])
                backward[index[rec.target]].add(index[s])
    for adjacency in (forward, backward):
        seen = {0}
        frontier = [0]
        while frontier:
            seen.update(nxt := set().union(*(adjacency[k] for k in frontier)) - seen)
            frontier = list(nxt)
        assert len(seen) == len(states)

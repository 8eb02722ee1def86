"""Height profiles and single-site moves of the raise-and-peel ring model.

A configuration is a cyclic height profile over L sites (L even): heights
are nonnegative integers, neighbors differ by exactly 1, the height parity
matches the site parity, and the profile touches level 0 or 1 somewhere.
Tiles land one per site at unit rate and the local shape decides what
happens: peaks reflect the tile, valleys absorb it, slopes launch an
avalanche that peels a layer off the fluctuation the slope belongs to, and
filling the last low valley triggers a global peel of the whole surface.

Every move conserves the balance (reflected) + (evacuated) + (net stored)
= 1 tile, which is what ties the stationary peak density to the evacuated
tile current.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb

HeightProfile = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 16


class MoveClass(Enum):
    REFLECTION = "reflection"
    ADSORPTION = "adsorption"
    LOCAL_AVALANCHE = "local_avalanche"
    GLOBAL_AVALANCHE = "global_avalanche"


@dataclass(frozen=True)
class TransitionRecord:
    """Outcome of dropping a tile at one site.

    delta_peak counts reflected tiles (0 or 1), delta_diamond evacuated
    tiles, delta_global completed global avalanches (0 or 1), and
    delta_tiles the net change of stored tiles, so that
    delta_peak + delta_diamond + delta_tiles == 1 for every move.
    """
    site: int
    move_class: MoveClass
    target: HeightProfile
    delta_peak: int
    delta_diamond: int
    delta_global: int
    delta_tiles: int

    def as_json_dict(self) -> dict:
        return {
            "site": self.site,
            "class": self.move_class.value,
            "target": list(self.target),
            "dPeak": self.delta_peak,
            "dDiamond": self.delta_diamond,
            "dGlobal": self.delta_global,
            "dTiles": self.delta_tiles,
        }


@dataclass(frozen=True)
class EventCounters:
    """Cumulative tile bookkeeping along a trajectory started from the substrate.

    n_total counts arrived tiles, n_peak reflected ones, n_diamond tiles
    evacuated by avalanches (arrived tile included), n_global completed
    global avalanches, and n_tiles the tiles currently stored.  The exact
    balance n_total == n_peak + n_diamond + n_tiles holds after every event.
    """
    n_total: int = 0
    n_peak: int = 0
    n_diamond: int = 0
    n_global: int = 0
    n_tiles: int = 0

    def advanced(self, record: "TransitionRecord") -> "EventCounters":
        return EventCounters(
            self.n_total + 1,
            self.n_peak + record.delta_peak,
            self.n_diamond + record.delta_diamond,
            self.n_global + record.delta_global,
            self.n_tiles + record.delta_tiles,
        )

    @property
    def balanced(self) -> bool:
        return self.n_total == self.n_peak + self.n_diamond + self.n_tiles

    def as_json_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_peak": self.n_peak,
            "n_diamond": self.n_diamond,
            "n_global": self.n_global,
            "n_tiles": self.n_tiles,
        }


def substrate(length: int) -> HeightProfile:
    """The flat profile (0, 1, 0, 1, ...), the lowest admissible state."""
    _check_length(length)
    return tuple(i % 2 for i in range(length))


def _check_length(length: int) -> None:
    if length < 2 or length % 2:
        raise ValueError(f"ring length must be even and >= 2, got {length}")


def check_profile(heights: HeightProfile) -> None:
    """Raise ValueError unless heights is an admissible profile."""
    length = len(heights)
    _check_length(length)
    for i, h in enumerate(heights):
        if h < 0:
            raise ValueError(f"negative height {h} at site {i}")
        if h % 2 != i % 2:
            raise ValueError(f"height {h} at site {i} breaks the parity rule")
        if abs(h - heights[(i + 1) % length]) != 1:
            raise ValueError(f"heights at sites {i}, {(i + 1) % length} do not differ by 1")
    if min(heights) > 1:
        raise ValueError("profile is detached from the bottom levels")


def tile_count(heights: HeightProfile) -> int:
    """Number of tiles stored above the substrate."""
    return sum(h - i % 2 for i, h in enumerate(heights)) // 2


def count_peaks(heights: HeightProfile) -> int:
    """Number of local maxima (both neighbors one step lower)."""
    length = len(heights)
    return sum(
        1 for i, h in enumerate(heights)
        if heights[i - 1] < h and heights[(i + 1) % length] < h)


def local_minima(heights: HeightProfile) -> list[int]:
    """Sites whose both neighbors are one step higher."""
    length = len(heights)
    return [i for i, h in enumerate(heights)
            if heights[i - 1] > h and heights[(i + 1) % length] > h]


def in_omega_global(heights: HeightProfile) -> bool:
    """Whether the profile is one tile away from a global avalanche.

    True when no valley sits at level 0 and exactly one valley sits at
    level 1; dropping a tile into that valley lifts the whole profile off
    the bottom and peels it by a full layer.
    """
    minima = local_minima(heights)
    return (all(heights[i] != 0 for i in minima)
            and sum(1 for i in minima if heights[i] == 1) == 1)


def classify_move(heights: HeightProfile, site: int) -> MoveClass:
    """Classify the outcome of a tile dropped at the given site."""
    length = len(heights)
    here = heights[site]
    left = heights[site - 1]
    right = heights[(site + 1) % length]
    if left < here and right < here:
        return MoveClass.REFLECTION
    if left > here and right > here:
        lifted = min(
            min(heights[j] for j in range(length) if j != site), here + 2)
        return (MoveClass.GLOBAL_AVALANCHE if lifted >= 2
                else MoveClass.ADSORPTION)
    return MoveClass.LOCAL_AVALANCHE


def apply_move(heights: HeightProfile, site: int) -> TransitionRecord:
    """Drop a tile at the given site and return the full move record."""
    length = len(heights)
    move = classify_move(heights, site)
    before = tile_count(heights)

    if move is MoveClass.REFLECTION:
        return TransitionRecord(site, move, heights, 1, 0, 0, 0)

    if move in (MoveClass.ADSORPTION, MoveClass.GLOBAL_AVALANCHE):
        lifted = list(heights)
        lifted[site] += 2
        if move is MoveClass.ADSORPTION:
            target = tuple(lifted)
            return TransitionRecord(site, move, target, 0, 0, 0, 1)
        target = tuple(h - 2 for h in lifted)
        evacuated = 1 + before - tile_count(target)
        assert evacuated == length
        return TransitionRecord(site, move, target, 0, evacuated, 1, 1 - evacuated)

    # avalanche along the slope: find where the height returns to the
    # slope level and peel one layer off everything strictly in between
    here = heights[site]
    ascending = heights[(site + 1) % length] > here
    step = 1 if ascending else -1
    peeled = list(heights)
    j = (site + step) % length
    while heights[j] != here:
        peeled[j] -= 2
        j = (j + step) % length
    target = tuple(peeled)
    evacuated = 1 + before - tile_count(target)
    return TransitionRecord(site, move, target, 0, evacuated, 0, 1 - evacuated)


def transitions(heights: HeightProfile) -> list[TransitionRecord]:
    """Records for a tile dropped at each of the L sites."""
    return [apply_move(heights, site) for site in range(len(heights))]


@lru_cache(maxsize=None)
def enumerate_states(length: int, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[HeightProfile, ...]:
    """All admissible profiles of the given length, lexicographically sorted.

    The count is C(L, L/2).  Enumeration is refused above the cap
    (default 16) because the state space grows like 4^L / sqrt(L).
    """
    _check_length(length)
    if length > cap:
        raise ValueError(
            f"enumeration of length {length} exceeds the cap {cap}")
    states: list[HeightProfile] = []
    # heights[0] is even; the profile must close cyclically and touch
    # level <= 1 somewhere
    max_h0 = length // 2 + 1

    def extend(prefix: list[int]) -> None:
        i = len(prefix)
        if i == length:
            if abs(prefix[-1] - prefix[0]) == 1 and min(prefix) <= 1:
                states.append(tuple(prefix))
            return
        for step in (1, -1):
            nxt = prefix[-1] + step
            # the remaining steps must be able to close the loop
            if nxt < 0 or abs(nxt - prefix[0]) > length - i:
                continue
            prefix.append(nxt)
            extend(prefix)
            prefix.pop()

    for h0 in range(0, max_h0 + 1, 2):
        extend([h0])
    states.sort()
    assert len(states) == comb(length, length // 2)
    return tuple(states)

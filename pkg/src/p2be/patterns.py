"""Color-patterns and per-node embedding states.

A color-pattern is the compressed sequence of edge colors met around a pole,
stored as a tuple of colors (``(0, 1, 0)`` is RBR). A *state* summarises one
embedding of a pertinent graph as ``(pu, pv, rim_r, rim_b)``:

* ``pu`` lists colors clockwise at pole ``u`` from side A to side B;
* ``pv`` lists colors counterclockwise at pole ``v`` from side A to side B;
* ``rim_c`` is a bitmask (1 = side A, 2 = side B) of the sides on which every
  pole-to-pole path of color ``c`` sees only color-``c`` edges and no extra
  vertex inside the pertinent graph. It is 3 when no such path exists.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .graph import BLUE, RED

Pattern = tuple
State = tuple  # (pu, pv, rim_r, rim_b)

PR: Pattern = (RED,)
PB: Pattern = (BLUE,)
PRB: Pattern = (RED, BLUE)
PBR: Pattern = (BLUE, RED)
PRBR: Pattern = (RED, BLUE, RED)
PBRB: Pattern = (BLUE, RED, BLUE)
ALL_PATTERNS: tuple[Pattern, ...] = (PR, PB, PRB, PBR, PRBR, PBRB)

RIM_A = 1
RIM_B = 2
RIM_BOTH = 3

_NAMES = {PR: "R", PB: "B", PRB: "RB", PBR: "BR", PRBR: "RBR", PBRB: "BRB"}
_BY_NAME = {v: k for k, v in _NAMES.items()}


def name(p: Pattern) -> str:
    return _NAMES.get(tuple(p)) or "".join("RB"[c] for c in p)


def from_name(s: str) -> Pattern:
    return _BY_NAME[s.upper()]


def compress(seq: Iterable[int]) -> Pattern:
    """Collapse runs of equal colors."""
    out: list[int] = []
    for c in seq:
        if not out or out[-1] != c:
            out.append(c)
    return tuple(out)


def concat(patterns: Iterable[Sequence[int]]) -> Pattern:
    out: list[int] = []
    for p in patterns:
        for c in p:
            if not out or out[-1] != c:
                out.append(c)
    return tuple(out)


def cyclic_count(p: Sequence[int]) -> int:
    """Number of maximal blocks of a compressed pattern read cyclically."""
    k = len(p)
    if k > 1 and p[0] == p[-1]:
        return k - 1
    return k


def is_subsequence(small: Sequence[int], big: Sequence[int]) -> bool:
    it = iter(big)
    return all(any(c == d for d in it) for c in small)


def swap_bits(rim: int) -> int:
    return ((rim & 1) << 1) | ((rim >> 1) & 1)


def flip_state(s: State) -> State:
    """Mirror the embedding: both patterns reverse and the rim sides swap."""
    pu, pv, rr, rb = s
    return (pu[::-1], pv[::-1], swap_bits(rr), swap_bits(rb))


def rename_poles(s: State) -> State:
    """Describe the same embedding with ``u`` and ``v`` exchanged."""
    pu, pv, rr, rb = s
    return (pv[::-1], pu[::-1], swap_bits(rr), swap_bits(rb))


def dominates(a: State, b: State) -> bool:
    """``a`` is at least as good as ``b`` for every enclosing check."""
    return (
        (a[2] | b[2]) == a[2]
        and (a[3] | b[3]) == a[3]
        and is_subsequence(a[0], b[0])
        and is_subsequence(a[1], b[1])
    )


def antichain(states: Iterable[State]) -> list[State]:
    """Drop dominated states; keeps first occurrences in input order."""
    kept: list[State] = []
    for s in states:
        if any(dominates(k, s) for k in kept):
            continue
        kept = [k for k in kept if not dominates(s, k)]
        kept.append(s)
    return kept


def state_str(s: State) -> str:
    return f"{name(s[0])}|{name(s[1])}|r{s[2]}|b{s[3]}"

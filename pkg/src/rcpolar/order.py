"""The universal reliability order on synthetic channels and its orbit quotient.

``i ≼ j`` is generated by two cover rules on LSB-first digits: a left swap
moves a single 1 one position up, and binary domination sets one extra 0 to 1.
Both rules strictly increase the integer value, so ascending index order is a
linear extension of ``≼``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .bitindex import as_profile, check_index
from .symmetry import Orbit, all_orbits, is_stabilized


def direct_successors(i: int, n: int) -> set[int]:
    check_index(i, n)
    out = set()
    for l in range(n):
        if not (i >> l) & 1:
            out.add(i | (1 << l))
        elif l + 1 < n and not (i >> (l + 1)) & 1:
            out.add(i ^ (0b11 << l))
    return out


@lru_cache(maxsize=32)
def _upsets(n: int) -> tuple[int, ...]:
    """Up-set of every index as an int bitmask, built top-down over covers."""
    N = 1 << n
    up = [0] * N
    for i in range(N - 1, -1, -1):
        mask = 1 << i
        for j in direct_successors(i, n):
            mask |= up[j]
        up[i] = mask
    return tuple(up)


def upset(i: int, n: int) -> set[int]:
    """All ``j`` with ``i ≼ j``."""
    check_index(i, n)
    mask = _upsets(n)[i]
    return {j for j in range(i, 1 << n) if (mask >> j) & 1}


def leq(i: int, j: int, n: int) -> bool:
    check_index(i, n)
    check_index(j, n)
    return bool((_upsets(n)[i] >> j) & 1)


def complies(info_set: Iterable[int], n: int) -> bool:
    """Upward closure under ``≼``, checked on cover edges only."""
    members = set(info_set)
    return all(direct_successors(i, n) <= members for i in members)


def orbit_leq(a: Orbit, b: Orbit) -> bool:
    if a.profile != b.profile:
        raise ValueError("orbits belong to different block profiles")
    n = a.profile.n
    ups = _upsets(n)
    target = sum(1 << j for j in b.indices)
    return any(ups[i] & target for i in a.indices)


def complies_symmetric(info_set: Iterable[int], s: Sequence[int]) -> bool:
    """Union of whole orbits whose selected orbits form an up-set of ``≼_s``."""
    prof = as_profile(s)
    members = set(info_set)
    if not is_stabilized(members, prof):
        return False
    # orbit-level closure equals element-level closure once I is a union of orbits
    return complies(members, prof.n)


@dataclass
class SymmetricOrder:
    """Hasse diagram of ``≼_s`` over the orbits of ``s``."""

    n: int
    s: tuple[int, ...]
    orbits: list[Orbit] = field(init=False)
    covers: dict[int, list[int]] = field(init=False)

    def __post_init__(self):
        prof = as_profile(self.s, self.n)
        self.s = tuple(prof)
        self.orbits = all_orbits(self.n, prof)
        ups = _upsets(self.n)
        masks = [sum(1 << j for j in o.indices) for o in self.orbits]
        # reach[a]: bitmask over orbit numbers b with D_a ≼_s D_b
        reach = []
        for o in self.orbits:
            up = 0
            for i in o.indices:
                up |= ups[i]
            reach.append(sum(1 << k for k, m in enumerate(masks) if up & m))
        strict = [r & ~(1 << a) for a, r in enumerate(reach)]
        self.covers = {}
        for a in range(len(reach)):
            beyond = 0
            for c in _bits(strict[a]):
                beyond |= strict[c]
            self.covers[a] = list(_bits(strict[a] & ~beyond))
        self._reach = reach

    def index_of(self, i: int) -> int:
        for k, o in enumerate(self.orbits):
            if i in o:
                return k
        raise KeyError(i)

    def leq(self, a: int, b: int) -> bool:
        return bool((self._reach[a] >> b) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, bs in self.covers.items() for b in bs]

    def edges_by_rep(self) -> set[tuple[int, int]]:
        """Cover edges keyed by the smallest member of each orbit."""
        return {(self.orbits[a].rep, self.orbits[b].rep) for a, b in self.edges()}

    def to_dot(self, name: str = "symmetric_order") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=box];"]
        for k, o in enumerate(self.orbits):
            members = ",".join(map(str, o.indices))
            lines.append(f'  o{k} [label="{o.label()}\\n{{{members}}}"];')
        for a, b in self.edges():
            lines.append(f"  o{a} -> o{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _bits(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


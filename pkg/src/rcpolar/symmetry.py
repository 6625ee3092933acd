"""Orbits under block digit permutations and block-lower-triangular affine maps.

A symbol permutation is stored as an index array ``perm`` with
``perm[i] = A @ expand(i) + b``.  Acting on a length-N vector it scatters:
``out[perm[i]] = y[i]`` (see :func:`permute`).  Composition follows
``(p ∘ q)[i] = p[q[i]]``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .bitindex import (BlockProfile, as_profile, bit_matrix, block_weights,
                       check_index, compress_rows)


@dataclass(frozen=True)
class Orbit:
    indices: tuple[int, ...]
    profile: BlockProfile

    @property
    def rep(self) -> int:
        return self.indices[0]

    @property
    def weights(self) -> list[int]:
        return block_weights(self.rep, self.profile)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def label(self) -> str:
        """LSB-first pattern; ``-w-`` marks a block holding ``w`` ones in any arrangement."""
        parts = []
        for (a, b), w in zip(self.profile.bounds(), self.weights):
            size = b - a
            if size == 1 or w in (0, size):
                parts.append(str(1 if w else 0) * size)
            else:
                parts.append(f"-{w}-")
        return "".join(parts)


def orbit(i: int, s: Sequence[int]) -> Orbit:
    """All images of ``i`` under digit permutations acting within blocks of ``s``."""
    prof = as_profile(s)
    check_index(i, prof.n)
    per_block = []
    for (a, b), w in zip(prof.bounds(), block_weights(i, prof)):
        per_block.append([sum(1 << (a + c) for c in comb)
                          for comb in itertools.combinations(range(b - a), w)])
    members = sorted(sum(parts) for parts in itertools.product(*per_block))
    return Orbit(tuple(members), prof)


def orbit_size(i: int, s: Sequence[int]) -> int:
    prof = as_profile(s)
    return math.prod(math.comb(sj, wj) for sj, wj in zip(prof, block_weights(i, prof)))


@lru_cache(maxsize=64)
def _all_orbits(prof: BlockProfile) -> tuple[Orbit, ...]:
    seen = np.zeros(1 << prof.n, dtype=bool)
    out = []
    for i in range(1 << prof.n):
        if not seen[i]:
            o = orbit(i, prof)
            seen[list(o.indices)] = True
            out.append(o)
    return tuple(out)


def all_orbits(n: int, s: Sequence[int]) -> list[Orbit]:
    """Partition of Z_N into orbits, ordered by smallest member."""
    return list(_all_orbits(as_profile(s, n)))


def orbit_ids(n: int, s: Sequence[int]) -> np.ndarray:
    """Orbit number (position in :func:`all_orbits`) of every index."""
    ids = np.empty(1 << n, dtype=np.int64)
    for k, o in enumerate(all_orbits(n, s)):
        ids[list(o.indices)] = k
    return ids


def is_stabilized(indices: Iterable[int], s: Sequence[int]) -> bool:
    """True iff the set is a union of whole orbits."""
    prof = as_profile(s)
    members = set(indices)
    for i in members:
        check_index(i, prof.n)
    return all(set(orbit(i, prof).indices) <= members for i in members)


@dataclass(frozen=True, eq=False)
class AffineAutomorphism:
    """Affine index map ``i -> A i + b`` over LSB-first digit vectors."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.uint8) & 1
        b = np.asarray(self.b, dtype=np.uint8) & 1
        if A.ndim != 2 or A.shape[0] != A.shape[1] or b.shape != (A.shape[0],):
            raise ValueError(f"incompatible shapes A{A.shape}, b{b.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def identity(cls, n: int) -> "AffineAutomorphism":
        return cls(np.eye(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    def __matmul__(self, other: "AffineAutomorphism") -> "AffineAutomorphism":
        """``self @ other`` applies ``other`` first."""
        return AffineAutomorphism(gf2.matmul(self.A, other.A),
                                  gf2.matmul(self.A, other.b) ^ self.b)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AffineAutomorphism)
                and np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b))

    def is_invertible(self) -> bool:
        return gf2.is_invertible(self.A)

    def in_blta(self, s: Sequence[int]) -> bool:
        """Invertible and zero above the block diagonal of ``s``."""
        blk = as_profile(s, self.n).block_of()
        above = blk[None, :] > blk[:, None]
        return not self.A[above].any() and self.is_invertible()

    def to_json(self) -> dict:
        return {"A": self.A.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "AffineAutomorphism":
        return cls(np.array(obj["A"]), np.array(obj["b"]))


def _random_invertible(k: int, rng: np.random.Generator) -> np.ndarray:
    # rejection; fewer than 4 draws on average over F2
    while True:
        m = rng.integers(0, 2, size=(k, k), dtype=np.uint8)
        if gf2.is_invertible(m):
            return m


def sample_blta(s: Sequence[int], rng: np.random.Generator) -> AffineAutomorphism:
    """Uniform draw from BLTA(s)."""
    prof = as_profile(s)
    n = prof.n
    A = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
    blk = prof.block_of()
    A[blk[None, :] > blk[:, None]] = 0
    for a, c in prof.bounds():
        A[a:c, a:c] = _random_invertible(c - a, rng)
    b = rng.integers(0, 2, size=n, dtype=np.uint8)
    return AffineAutomorphism(A, b)


def to_symbol_permutation(aut: AffineAutomorphism) -> np.ndarray:
    bits = bit_matrix(aut.n)
    images = (bits.astype(np.int64) @ aut.A.T.astype(np.int64) + aut.b) % 2
    return compress_rows(images)


def permute(y: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Scatter the last axis of ``y``: ``out[..., perm[i]] = y[..., i]``."""
    out = np.empty_like(y)
    out[..., perm] = y
    return out


def unpermute(y: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Inverse of :func:`permute`."""
    return y[..., perm]


def inverse_permutation(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``(p ∘ q)[i] = p[q[i]]``."""
    return np.asarray(p)[np.asarray(q)]


def as_affine(perm: np.ndarray) -> AffineAutomorphism | None:
    """Recover ``(A, b)`` from an index permutation, or None if it is not affine."""
    perm = np.asarray(perm, dtype=np.int64)
    N = len(perm)
    n = N.bit_length() - 1
    if N != 1 << n or n < 1:
        return None
    b = (perm[0] >> np.arange(n)) & 1
    cols = [(perm[1 << k] ^ perm[0]) for k in range(n)]
    A = ((np.array(cols)[None, :] >> np.arange(n)[:, None]) & 1).astype(np.uint8)
    aut = AffineAutomorphism(A, b)
    if not np.array_equal(to_symbol_permutation(aut), perm):
        return None
    return aut


def is_lower_triangular_affine(perm: np.ndarray) -> bool:
    aut = as_affine(perm)
    return aut is not None and not np.triu(aut.A, 1).any()


def is_sc_equivalent(p: np.ndarray, q: np.ndarray) -> bool:
    """True iff ``p ∘ q⁻¹`` is lower-triangular affine (absorbed by SC decoding)."""
    p = np.asarray(p)
    q = np.asarray(q)
    if p.shape != q.shape:
        raise ValueError("permutations have different lengths")
    return is_lower_triangular_affine(compose(p, inverse_permutation(q)))

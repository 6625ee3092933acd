"""Bit-level helpers for synthetic-channel indices.

All binary expansions are LSB-first: digit ``l`` is the coefficient of ``2**l``.
A block profile partitions the ``n`` digits into contiguous blocks, block 0
covering the least significant digits.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

MAX_N = 20


class BlockProfile(tuple):
    """Block sizes ``[s_0, ..., s_{m-1}]`` partitioning the index digits."""

    def __new__(cls, sizes: Iterable[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValueError("block profile must contain at least one block")
        if any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {list(sizes)}")
        if sum(sizes) > MAX_N:
            raise ValueError(f"block profile covers {sum(sizes)} digits, cap is {MAX_N}")
        return super().__new__(cls, sizes)

    @classmethod
    def parse(cls, text: str) -> "BlockProfile":
        """Parse a comma-separated profile such as ``"1,1,1,3"``."""
        try:
            return cls(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"invalid block profile {text!r}: {exc}") from None

    @classmethod
    def trivial(cls, n: int) -> "BlockProfile":
        return cls([1] * n)

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def m(self) -> int:
        return len(self)

    def bounds(self) -> list[tuple[int, int]]:
        """Half-open digit ranges ``(start, stop)`` of each block."""
        out, start = [], 0
        for s in self:
            out.append((start, start + s))
            start += s
        return out

    def block_of(self) -> np.ndarray:
        """Block id of every digit position."""
        return np.repeat(np.arange(self.m), self)

    def __repr__(self) -> str:
        return f"BlockProfile({list(self)})"


def as_profile(s, n: int | None = None) -> BlockProfile:
    prof = s if isinstance(s, BlockProfile) else BlockProfile(s)
    if n is not None and prof.n != n:
        raise ValueError(f"block profile {list(prof)} covers {prof.n} digits, expected n={n}")
    return prof


def check_index(i: int, n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in [1, {MAX_N}], got {n}")
    if not 0 <= i < (1 << n):
        raise ValueError(f"index {i} outside Z_{1 << n}")


def expand(i: int, n: int) -> list[int]:
    """LSB-first binary expansion of ``i`` with ``n`` digits."""
    check_index(i, n)
    return [(i >> l) & 1 for l in range(n)]


def compress(bits: Sequence[int]) -> int:
    """Inverse of :func:`expand`."""
    if len(bits) < 1:
        raise ValueError("bit vector must be non-empty")
    value = 0
    for l, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"non-binary digit {b!r}")
        value |= int(b) << l
    return value


def bit_matrix(n: int) -> np.ndarray:
    """``(2**n, n)`` array whose row ``i`` is ``expand(i, n)``."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def compress_rows(bits: np.ndarray) -> np.ndarray:
    """Row-wise :func:`compress` for an ``(..., n)`` bit array."""
    n = bits.shape[-1]
    return (bits.astype(np.int64) << np.arange(n)).sum(axis=-1)


def hamming_weight(i: int) -> int:
    return bin(i).count("1")


class DigitPermutation(tuple):
    """Permutation ``sigma`` of digit positions; digit ``l`` moves to ``sigma[l]``."""

    def __new__(cls, mapping: Iterable[int]):
        mapping = tuple(int(x) for x in mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"{list(mapping)} is not a permutation")
        return super().__new__(cls, mapping)

    @classmethod
    def identity(cls, n: int) -> "DigitPermutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self)

    def compose(self, other: "DigitPermutation") -> "DigitPermutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("permutations act on different digit counts")
        return DigitPermutation(self[other[l]] for l in range(self.n))

    def inverse(self) -> "DigitPermutation":
        inv = [0] * self.n
        for l, t in enumerate(self):
            inv[t] = l
        return DigitPermutation(inv)


def apply_digit_perm(sigma: Sequence[int], i: int, n: int | None = None) -> int:
    """Move bit ``l`` of ``i`` to position ``sigma[l]``."""
    n = len(sigma) if n is None else n
    if len(sigma) != n:
        raise ValueError(f"permutation on {len(sigma)} digits applied to an {n}-digit index")
    check_index(i, n)
    out = 0
    for l in range(n):
        if (i >> l) & 1:
            out |= 1 << sigma[l]
    return out


def block_weights(i: int, s: Sequence[int]) -> list[int]:
    """Hamming weight of ``i`` inside each block of ``s``."""
    prof = as_profile(s)
    check_index(i, prof.n)
    return [hamming_weight((i >> a) & ((1 << (b - a)) - 1)) for a, b in prof.bounds()]

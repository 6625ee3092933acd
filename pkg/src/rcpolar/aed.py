"""Automorphism ensemble SC decoding."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codec import sc_decode
from .construct import CodeSpec
from .symmetry import (AffineAutomorphism, is_sc_equivalent, permute, sample_blta,
                       to_symbol_permutation, unpermute)

REJECTION_FACTOR = 100


class EnsembleExhausted(RuntimeError):
    """Fewer SC-inequivalent automorphisms reachable than requested."""


@dataclass
class Ensemble:
    automorphisms: list[AffineAutomorphism]
    s: tuple[int, ...]
    seed: int | None = None
    perms: list[np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        self.perms = [to_symbol_permutation(a) for a in self.automorphisms]

    @property
    def M(self) -> int:
        return len(self.perms)

    def to_json(self) -> dict:
        return {"s": list(self.s), "seed": self.seed,
                "automorphisms": [a.to_json() for a in self.automorphisms]}

    @classmethod
    def from_json(cls, obj: dict) -> "Ensemble":
        return cls([AffineAutomorphism.from_json(a) for a in obj["automorphisms"]],
                   tuple(obj["s"]), obj.get("seed"))


def build_ensemble(spec: CodeSpec, M: int, seed: int | None = 0,
                   rng: np.random.Generator | None = None) -> Ensemble:
    """Identity plus ``M - 1`` random BLTA(s) maps, pairwise not SC-equivalent.

    The profile comes from ``spec.s``.  Draws that are SC-equivalent to an
    accepted member are rejected; after ``100 * M`` draws the pool is declared
    exhausted.
    """
    if M < 1:
        raise ValueError(f"ensemble size must be >= 1, got {M}")
    if spec.s is None:
        raise ValueError("code spec carries no block profile; cannot sample BLTA(s)")
    if rng is None:
        rng = np.random.default_rng(seed)
    accepted = [AffineAutomorphism.identity(spec.n)]
    perms = [to_symbol_permutation(accepted[0])]
    draws = 0
    while len(accepted) < M:
        if draws >= REJECTION_FACTOR * M:
            raise EnsembleExhausted(
                f"found only {len(accepted)} SC-inequivalent automorphisms of BLTA({list(spec.s)}) "
                f"after {draws} draws; requested M={M}")
        draws += 1
        aut = sample_blta(spec.s, rng)
        p = to_symbol_permutation(aut)
        if not any(is_sc_equivalent(p, q) for q in perms):
            accepted.append(aut)
            perms.append(p)
    return Ensemble(accepted, tuple(spec.s), seed)


def correlation(x: np.ndarray, llr: np.ndarray) -> np.ndarray:
    """``sum((1 - 2x) * llr)``; larger means more likely under BPSK/AWGN."""
    return ((1.0 - 2.0 * x) * llr).sum(axis=-1)


def ae_candidates(spec: CodeSpec, llr: np.ndarray, ens: Ensemble, workers: int = 1) -> np.ndarray:
    """De-permuted SC estimates, shape ``(M, batch, N)``."""
    llr = np.atleast_2d(np.asarray(llr, dtype=float))

    def branch(perm):
        return unpermute(sc_decode(spec, permute(llr, perm))[1], perm)

    if workers > 1 and ens.M > 1:
        with ThreadPoolExecutor(workers) as pool:
            return np.stack(list(pool.map(branch, ens.perms)))
    return np.stack([branch(p) for p in ens.perms])


def ae_sc_decode(spec: CodeSpec, llr: np.ndarray, ens: Ensemble) -> np.ndarray:
    """Most likely candidate among the ensemble's SC decodings (first on ties)."""
    arr = np.asarray(llr, dtype=float)
    single = arr.ndim == 1
    arr = np.atleast_2d(arr)
    cand = ae_candidates(spec, arr, ens)
    best = np.argmax(correlation(cand, arr[None]), axis=0)
    out = cand[best, np.arange(arr.shape[0])]
    return out[0] if single else out

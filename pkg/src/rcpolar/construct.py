"""Polar code construction from (symmetric) beta-expansion weights.

Plain beta-expansion weights an index by ``sum(bit_l * beta**l)``.  The
symmetric variant replaces ``beta**l`` by the mean of ``beta**l'`` over the
block containing ``l``, which makes the weight constant on every orbit while
keeping it monotone along the partial order.  Thresholding that weight yields
nested information sets whose automorphism group contains BLTA(s).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bitindex import BlockProfile, as_profile, bit_matrix, check_index
from .order import complies, complies_symmetric
from .symmetry import all_orbits, is_stabilized, orbit_ids

TIE_EPS = 1e-9


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"beta must satisfy 1 < beta <= 2, got {beta}")
    return beta


def beta_weight(i: int, n: int, beta: float) -> float:
    """Plain beta-expansion polarization weight."""
    beta = _check_beta(beta)
    check_index(i, n)
    return sum(beta**l for l in range(n) if (i >> l) & 1)


def symmetric_beta_values(s: Sequence[int], beta: float) -> np.ndarray:
    """Per-digit weights: the mean of ``beta**l`` over each block."""
    beta = _check_beta(beta)
    prof = as_profile(s)
    powers = beta ** np.arange(prof.n, dtype=float)
    out = np.empty(prof.n)
    for a, b in prof.bounds():
        out[a:b] = powers[a:b].mean()
    return out


def symmetric_weight(i: int, s: Sequence[int], beta: float) -> float:
    prof = as_profile(s)
    check_index(i, prof.n)
    vals = symmetric_beta_values(prof, beta)
    return float(sum(vals[l] for l in range(prof.n) if (i >> l) & 1))


def weight_table(n: int, s: Sequence[int], beta: float) -> np.ndarray:
    """Symmetric weights of all ``2**n`` indices."""
    prof = as_profile(s, n)
    return bit_matrix(n) @ symmetric_beta_values(prof, beta)


@dataclass
class CodeSpec:
    """A polar code given by its information set, plus design metadata."""

    n: int
    info_set: tuple[int, ...]
    s: tuple[int, ...] | None = None
    beta: float | None = None
    requested_k: int | None = None
    frozen_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = 1 << self.n
        info = sorted(set(int(i) for i in self.info_set))
        if len(info) != len(self.info_set):
            raise ValueError("information set contains duplicates")
        for i in info:
            check_index(i, self.n)
        self.info_set = tuple(info)
        if self.s is not None:
            self.s = tuple(as_profile(self.s, self.n))
        if self.requested_k is None:
            self.requested_k = len(info)
        mask = np.ones(N, dtype=bool)
        mask[list(info)] = False
        self.frozen_mask = mask

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def k(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.k / self.N

    @property
    def info_mask(self) -> np.ndarray:
        return ~self.frozen_mask

    @property
    def frozen_set(self) -> tuple[int, ...]:
        return tuple(np.nonzero(self.frozen_mask)[0].tolist())

    @property
    def code_id(self) -> str:
        tag = f"N{self.N}_K{self.k}"
        if self.s is not None:
            tag += "_s" + "-".join(map(str, self.s))
        if self.beta is not None:
            tag += f"_b{self.beta:g}"
        return tag

    def to_json(self) -> dict:
        return {"n": self.n, "requested_k": self.requested_k, "k": self.k,
                "s": list(self.s) if self.s is not None else None,
                "beta": self.beta, "info_set": list(self.info_set)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> "CodeSpec":
        spec = cls(n=int(obj["n"]), info_set=tuple(obj["info_set"]), s=obj.get("s"),
                   beta=obj.get("beta"), requested_k=obj.get("requested_k"))
        if "k" in obj and int(obj["k"]) != spec.k:
            raise ValueError(f"declared k={obj['k']} but info_set has {spec.k} entries")
        return spec

    @classmethod
    def loads(cls, text: str) -> "CodeSpec":
        return cls.from_json(json.loads(text))


def _threshold_set(w: np.ndarray, K: int) -> np.ndarray:
    # weights within TIE_EPS of the K-th largest are all admitted
    t = np.sort(w)[::-1][K - 1]
    return np.nonzero(w >= t - TIE_EPS)[0]


def design(n: int, s: Sequence[int], beta: float, K: int) -> CodeSpec:
    """Information set from the K largest symmetric weights, ties admitted together."""
    prof = as_profile(s, n)
    beta = _check_beta(beta)
    N = 1 << n
    if not isinstance(K, (int, np.integer)) or not 0 < K <= N:
        raise ValueError(f"K must satisfy 0 < K <= {N}, got {K}")
    info = _threshold_set(weight_table(n, prof, beta), int(K))
    return CodeSpec(n=n, info_set=tuple(info.tolist()), s=tuple(prof), beta=beta,
                    requested_k=int(K))


def beta_design(n: int, beta: float, K: int) -> CodeSpec:
    """Plain beta-expansion: exactly the K indices of largest weight.

    Ties are broken by larger index first, so orbits can be split.
    """
    beta = _check_beta(beta)
    N = 1 << n
    if not 0 < K <= N:
        raise ValueError(f"K must satisfy 0 < K <= {N}, got {K}")
    w = bit_matrix(n) @ (beta ** np.arange(n, dtype=float))
    order = sorted(range(N), key=lambda i: (-w[i], -i))
    return CodeSpec(n=n, info_set=tuple(order[:K]), beta=beta, requested_k=K)


def achievable_dimensions(n: int, s: Sequence[int], beta: float) -> list[int]:
    """Every dimension :func:`design` can return for this ``(n, s, beta)``."""
    w = weight_table(n, as_profile(s, n), _check_beta(beta))
    ws = np.sort(w)[::-1]
    return sorted({int(np.count_nonzero(w >= t - TIE_EPS)) for t in ws})


def verify(spec: CodeSpec, s: Sequence[int] | None = None) -> dict:
    """Partial-order, stabilizer and symmetric-order checks with per-orbit membership."""
    prof = as_profile(s if s is not None else (spec.s or BlockProfile.trivial(spec.n)), spec.n)
    info = set(spec.info_set)
    rows = []
    for k, o in enumerate(all_orbits(spec.n, prof)):
        hit = sum(i in info for i in o.indices)
        status = "info" if hit == len(o) else ("frozen" if hit == 0 else "split")
        rows.append({"orbit": k, "label": o.label(), "members": list(o.indices),
                     "in_info": hit, "status": status})
    return {
        "code_id": spec.code_id,
        "s": list(prof),
        "k": spec.k,
        "complies": complies(info, spec.n),
        "is_stabilized": is_stabilized(info, prof),
        "complies_symmetric": complies_symmetric(info, prof),
        "orbits": rows,
    }


def weight_table_csv(n: int, s: Sequence[int], beta: float) -> str:
    """CSV rows: index, LSB-first binary string, orbit id, symmetric weight."""
    prof = as_profile(s, n)
    w = weight_table(n, prof, beta)
    ids = orbit_ids(n, prof)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["index", "binary_lsb_first", "orbit_id", "weight"])
    for i in range(1 << n):
        bits = "".join(str((i >> l) & 1) for l in range(n))
        out.writerow([i, bits, int(ids[i]), repr(float(w[i]))])
    return buf.getvalue()

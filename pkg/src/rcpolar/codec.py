"""Polar encoding, SC / SCL decoding and CRC outer codes.

Natural index order throughout: ``x = u G_N`` with ``G_N[i, j] = 1`` iff the
digits of ``j`` are a subset of those of ``i``.  Decoders work on batches of
LLR rows (positive LLR favours bit 0) using the min-sum check-node update.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .construct import CodeSpec


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Butterfly evaluation of ``u G_N`` over the last axis (an involution)."""
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    lead = x.shape[:-1]
    h = 1
    while h < N:
        v = x.reshape(*lead, N // (2 * h), 2, h)
        v[..., 0, :] ^= v[..., 1, :]
        h *= 2
    return x


def generator_matrix(n: int) -> np.ndarray:
    """Explicit Kronecker power ``[[1,0],[1,1]]^{⊗n}``."""
    g = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        g = np.kron(np.array([[1, 0], [1, 1]], dtype=np.uint8), g)
    return g


def encode(spec: CodeSpec, msg: np.ndarray) -> np.ndarray:
    """Place message bits on the information set (ascending) and transform.

    ``msg`` may be a single message of length ``k`` or a ``(batch, k)`` array.
    """
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.shape[-1] != spec.k:
        raise ValueError(f"message length {msg.shape[-1]} != k={spec.k}")
    u = np.zeros(msg.shape[:-1] + (spec.N,), dtype=np.uint8)
    u[..., list(spec.info_set)] = msg
    return polar_transform(u)


def extract_message(spec: CodeSpec, x: np.ndarray) -> np.ndarray:
    return polar_transform(x)[..., list(spec.info_set)]


def _f(a, b):
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def _g(a, b, x):
    return np.where(x.astype(bool), b - a, b + a)


def _sc(llr: np.ndarray, frozen: np.ndarray) -> np.ndarray:
    size = llr.shape[-1]
    if frozen.all():
        return np.zeros(llr.shape, dtype=np.uint8)
    if size == 1:
        return (llr < 0).astype(np.uint8)
    h = size // 2
    a, b = llr[..., :h], llr[..., h:]
    x1 = _sc(_f(a, b), frozen[:h])
    x2 = _sc(_g(a, b, x1), frozen[h:])
    return np.concatenate([x1 ^ x2, x2], axis=-1)


def _as_batch(spec: CodeSpec, llr) -> tuple[np.ndarray, bool]:
    llr = np.asarray(llr, dtype=float)
    single = llr.ndim == 1
    llr = np.atleast_2d(llr)
    if llr.shape[-1] != spec.N:
        raise ValueError(f"LLR length {llr.shape[-1]} != N={spec.N}")
    return llr, single


def sc_decode(spec: CodeSpec, llr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Successive cancellation decoding; returns ``(u_hat, x_hat)``."""
    llr, single = _as_batch(spec, llr)
    x = _sc(llr, spec.frozen_mask)
    u = extract_message(spec, x)
    return (u[0], x[0]) if single else (u, x)


def _scl(llr, frozen, pm, L):
    """Recursive list decoding over a batch.

    ``llr`` has shape ``(B, P, size)`` and ``pm`` shape ``(B, P)``.  Returns the
    partial codewords of the surviving paths, their parent path index (into the
    ``P`` input paths) and updated metrics.
    """
    B, P, size = llr.shape
    if size == 1:
        lam = llr[..., 0]
        pen0 = np.where(lam < 0, -lam, 0.0)
        pen1 = np.where(lam > 0, lam, 0.0)
        if frozen[0]:
            return np.zeros((B, P, 1), dtype=np.uint8), np.broadcast_to(np.arange(P), (B, P)), pm + pen0
        cand = np.concatenate([pm + pen0, pm + pen1], axis=1)
        keep = min(L, 2 * P)
        order = np.argsort(cand, axis=1, kind="stable")[:, :keep]
        new_pm = np.take_along_axis(cand, order, axis=1)
        bits = (order // P).astype(np.uint8)[..., None]
        return bits, order % P, new_pm
    h = size // 2
    if frozen.all():
        # frozen subtree: every leaf decision is 0, only the metric moves
        x = np.zeros((B, P, size), dtype=np.uint8)
        return x, np.broadcast_to(np.arange(P), (B, P)), pm + _frozen_penalty(llr)
    a, b = llr[..., :h], llr[..., h:]
    x1, o1, pm = _scl(_f(a, b), frozen[:h], pm, L)
    a = np.take_along_axis(a, o1[..., None], axis=1)
    b = np.take_along_axis(b, o1[..., None], axis=1)
    x2, o2, pm = _scl(_g(a, b, x1), frozen[h:], pm, L)
    x1 = np.take_along_axis(x1, o2[..., None], axis=1)
    origin = np.take_along_axis(o1, o2, axis=1)
    return np.concatenate([x1 ^ x2, x2], axis=-1), origin, pm


def _frozen_penalty(llr):
    """Path-metric increment of an all-frozen subtree, leaf by leaf."""
    size = llr.shape[-1]
    if size == 1:
        lam = llr[..., 0]
        return np.where(lam < 0, -lam, 0.0)
    h = size // 2
    a, b = llr[..., :h], llr[..., h:]
    return _frozen_penalty(_f(a, b)) + _frozen_penalty(a + b)


@dataclass(frozen=True)
class CrcConfig:
    """Polynomial given MSB-first including the leading 1; degree ``r = len - 1``."""

    poly: tuple[int, ...]

    def __post_init__(self):
        poly = tuple(int(c) for c in self.poly)
        if len(poly) < 2 or poly[0] != 1 or any(c not in (0, 1) for c in poly):
            raise ValueError(f"invalid CRC polynomial {poly}")
        object.__setattr__(self, "poly", poly)

    @property
    def r(self) -> int:
        return len(self.poly) - 1

    @classmethod
    def from_hex(cls, text: str, degree: int) -> "CrcConfig":
        """``text`` lists the coefficients below the leading term, e.g. ``0x21`` for x^6+x^5+1."""
        value = int(text, 16)
        return cls((1,) + tuple((value >> k) & 1 for k in range(degree - 1, -1, -1)))

    @property
    def name(self) -> str:
        return f"crc{self.r}"

    def _parity_matrix(self, k: int) -> np.ndarray:
        rows = np.zeros((k, self.r), dtype=np.uint8)
        for t in range(k):
            e = np.zeros(k, dtype=np.uint8)
            e[t] = 1
            rows[t] = _crc_remainder(e, self.poly)
        return rows


CRC6 = CrcConfig((1, 1, 0, 0, 0, 0, 1))
CRC11 = CrcConfig((1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1))
CRC_PRESETS = {"crc6": CRC6, "crc11": CRC11}


def _crc_remainder(msg: Sequence[int], poly: Sequence[int]) -> np.ndarray:
    r = len(poly) - 1
    reg = list(int(b) for b in msg) + [0] * r
    for t in range(len(msg)):
        if reg[t]:
            for c, p in enumerate(poly):
                reg[t + c] ^= p
    return np.array(reg[len(msg):], dtype=np.uint8)


def crc_checksum(msg: np.ndarray, crc: CrcConfig) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.ndim == 1:
        return _crc_remainder(msg, crc.poly)
    par = crc._parity_matrix(msg.shape[-1])
    return (msg.astype(np.int64) @ par % 2).astype(np.uint8)


def crc_attach(msg: np.ndarray, crc: CrcConfig) -> np.ndarray:
    msg = np.asarray(msg, dtype=np.uint8)
    return np.concatenate([msg, crc_checksum(msg, crc)], axis=-1)


def crc_check(bits: np.ndarray, crc: CrcConfig) -> np.ndarray | bool:
    bits = np.asarray(bits, dtype=np.uint8)
    payload, tail = bits[..., : -crc.r], bits[..., -crc.r:]
    ok = (crc_checksum(payload, crc) == tail).all(axis=-1)
    return bool(ok) if bits.ndim == 1 else ok


def scl_decode(spec: CodeSpec, llr: np.ndarray, L: int, crc: CrcConfig | None = None,
               return_metrics: bool = False):
    """Successive cancellation list decoding.

    Keeps the ``L`` paths of smallest metric after every information bit.
    With ``crc`` the last ``crc.r`` message bits are a checksum of the rest and
    the best path passing the check is returned; if none passes, the best path
    overall.  Returns the codeword estimate(s).
    """
    if L < 1:
        raise ValueError(f"list size must be >= 1, got {L}")
    llr, single = _as_batch(spec, llr)
    if crc is not None and crc.r >= spec.k:
        raise ValueError(f"CRC of degree {crc.r} does not fit into k={spec.k}")
    B = llr.shape[0]
    x, _, pm = _scl(llr[:, None, :], spec.frozen_mask, np.zeros((B, 1)), int(L))
    choice = np.argmin(pm, axis=1)
    if crc is not None:
        ok = crc_check(extract_message(spec, x), crc)
        masked = np.where(ok, pm, np.inf)
        choice = np.where(ok.any(axis=1), np.argmin(masked, axis=1), choice)
    else:
        assert (pm[np.arange(B), choice] <= pm.min(axis=1)).all()
    best = x[np.arange(B), choice]
    if return_metrics:
        return (best[0], pm[0]) if single else (best, pm)
    return best[0] if single else best

"""BPSK/AWGN Monte-Carlo BLER estimation and required-SNR search.

Every frame draws its message and noise from its own counter-based stream
(Philox keyed by the seed, counter set by the frame index), so results do not
depend on how frames are spread over workers.  Frames are processed in
fixed-size chunks and the stop rule is evaluated at chunk boundaries in
order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .aed import Ensemble, ae_sc_decode, build_ensemble
from .codec import CRC_PRESETS, CrcConfig, crc_attach, encode, sc_decode, scl_decode
from .construct import CodeSpec

Z95 = 1.959963984540054
DEFAULT_CHUNK = 1000
CSV_FIELDS = ["code_id", "decoder", "L_or_M", "ebn0_db", "frames", "errors", "bler",
              "ci_low", "ci_high", "seed"]


def noise_variance(ebn0_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ValueError(f"code rate must lie in (0, 1], got {rate}")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


@dataclass(frozen=True)
class ChannelPoint:
    ebn0_db: float
    rate: float

    @property
    def sigma2(self) -> float:
        return noise_variance(self.ebn0_db, self.rate)


def llr_from_noise(x: np.ndarray, z: np.ndarray, sigma2: float) -> np.ndarray:
    """Channel LLRs for BPSK ``0 -> +1`` given standard-normal draws ``z``."""
    y = 1.0 - 2.0 * np.asarray(x, dtype=float) + math.sqrt(sigma2) * z
    return 2.0 * y / sigma2


def transmit(codeword: np.ndarray, point: ChannelPoint, rng: np.random.Generator) -> np.ndarray:
    codeword = np.asarray(codeword)
    return llr_from_noise(codeword, rng.standard_normal(codeword.shape), point.sigma2)


def wilson_interval(errors: int, frames: int, z: float = Z95) -> tuple[float, float]:
    if frames == 0:
        return 0.0, 1.0
    p = errors / frames
    denom = 1 + z * z / frames
    centre = (p + z * z / (2 * frames)) / denom
    half = z * math.sqrt(p * (1 - p) / frames + z * z / (4 * frames * frames)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def frame_rng(seed: int, frame: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, frame, 0]))


@dataclass(frozen=True)
class DecoderConfig:
    """One decoder of a campaign: ``sc``, ``scl`` (L), ``ae-sc`` (M) or ``ca-scl`` (L + CRC)."""

    kind: str
    size: int = 1
    crc: str | None = None
    ensemble_seed: int | None = None

    KINDS = ("sc", "scl", "ae-sc", "ca-scl")

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in self.KINDS:
            raise ValueError(f"unknown decoder kind {self.kind!r}; choose from {self.KINDS}")
        if int(self.size) < 1:
            raise ValueError(f"decoder size must be >= 1, got {self.size}")
        object.__setattr__(self, "size", int(self.size))
        if kind == "ca-scl" and self.crc is None:
            raise ValueError("ca-scl needs a crc (e.g. 'crc6', 'crc11')")
        if kind != "ca-scl" and self.crc is not None:
            raise ValueError(f"crc given for non CRC-aided decoder {kind!r}")
        if kind == "sc" and self.size != 1:
            raise ValueError("sc has no size parameter")
        if self.crc is not None:
            crc_config(self.crc)

    @property
    def label(self) -> str:
        base = self.kind.upper()
        return f"{base}+{self.crc}" if self.crc else base

    @property
    def crc_config(self) -> CrcConfig | None:
        return crc_config(self.crc) if self.crc else None

    @classmethod
    def from_json(cls, obj: dict) -> "DecoderConfig":
        return cls(kind=obj["kind"], size=obj.get("size", 1), crc=obj.get("crc"),
                   ensemble_seed=obj.get("ensemble_seed"))

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def crc_config(name: str) -> CrcConfig:
    """A preset name (``crc6``, ``crc11``) or an MSB-first bit string like ``1100001``."""
    if name in CRC_PRESETS:
        return CRC_PRESETS[name]
    if set(name) <= {"0", "1"}:
        return CrcConfig(tuple(int(c) for c in name))
    raise ValueError(f"unknown CRC {name!r}")


@lru_cache(maxsize=32)
def _ensemble(spec_text: str, M: int, seed: int) -> Ensemble:
    return build_ensemble(CodeSpec.loads(spec_text), M, seed=seed)


def make_decoder(spec: CodeSpec, dec: DecoderConfig, seed: int = 0) -> Callable[[np.ndarray], np.ndarray]:
    """Callable mapping an LLR batch to codeword estimates."""
    if dec.kind == "sc":
        return lambda llr: sc_decode(spec, llr)[1]
    if dec.kind == "scl":
        return lambda llr: scl_decode(spec, llr, dec.size)
    if dec.kind == "ca-scl":
        crc = dec.crc_config
        return lambda llr: scl_decode(spec, llr, dec.size, crc)
    ens_seed = seed if dec.ensemble_seed is None else dec.ensemble_seed
    ens = _ensemble(spec.dumps(), dec.size, ens_seed)
    return lambda llr: ae_sc_decode(spec, llr, ens)


def ensemble_for(spec: CodeSpec, dec: DecoderConfig, seed: int = 0) -> Ensemble | None:
    if dec.kind != "ae-sc":
        return None
    return _ensemble(spec.dumps(), dec.size, seed if dec.ensemble_seed is None else dec.ensemble_seed)


def draw_frames(spec: CodeSpec, payload_k: int, seed: int, start: int, count: int):
    """Messages ``(count, payload_k)`` and standard normals ``(count, N)``."""
    msgs = np.empty((count, payload_k), dtype=np.uint8)
    z = np.empty((count, spec.N))
    for t in range(count):
        g = frame_rng(seed, start + t)
        msgs[t] = g.integers(0, 2, size=payload_k, dtype=np.uint8)
        z[t] = g.standard_normal(spec.N)
    return msgs, z


def run_chunk(spec_text: str, dec: DecoderConfig, ebn0_db: float, seed: int,
              start: int, count: int) -> int:
    """Frame errors among frames ``start .. start+count-1``."""
    spec = CodeSpec.loads(spec_text)
    crc = dec.crc_config
    payload_k = spec.k - (crc.r if crc else 0)
    if payload_k < 0:
        raise ValueError(f"CRC of degree {crc.r} exceeds k={spec.k}")
    msgs, z = draw_frames(spec, payload_k, seed, start, count)
    if crc is not None:
        msgs = crc_attach(msgs, crc)
    x = encode(spec, msgs)
    llr = llr_from_noise(x, z, noise_variance(ebn0_db, spec.rate))
    x_hat = make_decoder(spec, dec, seed)(llr)
    return int((x_hat != x).any(axis=1).sum())


@dataclass
class StopRule:
    min_errors: int = 100
    max_frames: int = 100_000

    def __post_init__(self):
        if self.min_errors < 1 or self.max_frames < 1:
            raise ValueError("stop rule needs min_errors >= 1 and max_frames >= 1")


@dataclass
class SimResult:
    code_id: str
    decoder: str
    size: int
    ebn0_db: float
    frames: int
    frame_errors: int
    seed: int
    ci95: tuple[float, float] = field(init=False)

    def __post_init__(self):
        self.ci95 = wilson_interval(self.frame_errors, self.frames)

    @property
    def bler(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    def row(self) -> dict:
        return {"code_id": self.code_id, "decoder": self.decoder, "L_or_M": self.size,
                "ebn0_db": f"{self.ebn0_db:.4f}", "frames": self.frames,
                "errors": self.frame_errors, "bler": f"{self.bler:.6e}",
                "ci_low": f"{self.ci95[0]:.6e}", "ci_high": f"{self.ci95[1]:.6e}",
                "seed": self.seed}


def _simulate(spec: CodeSpec, dec: DecoderConfig, ebn0_db: float, seed: int,
              done: Callable[[int, int], bool], max_frames: int, workers: int,
              chunk: int) -> tuple[int, int]:
    text = spec.dumps()
    frames = errors = 0
    starts = range(0, max_frames, chunk)
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        pos = 0
        while pos < len(starts):
            wave = starts[pos: pos + max(1, workers)]
            pos += len(wave)
            jobs = [(text, dec, ebn0_db, seed, s, min(chunk, max_frames - s)) for s in wave]
            if pool is None:
                results = [run_chunk(*j) for j in jobs]
            else:
                results = list(pool.map(run_chunk, *zip(*jobs)))
            for job, e in zip(jobs, results):
                frames += job[-1]
                errors += e
                if done(frames, errors) or frames >= max_frames:
                    return frames, errors
    finally:
        if pool is not None:
            pool.shutdown()
    return frames, errors


def estimate_bler(spec: CodeSpec, dec: DecoderConfig, ebn0_db: float, stop: StopRule | None = None,
                  seed: int = 0, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> SimResult:
    """BLER at one Eb/N0 point; a frame errs iff the decoded codeword differs."""
    stop = stop or StopRule()
    frames, errors = _simulate(spec, dec, ebn0_db, seed,
                               lambda f, e: e >= stop.min_errors, stop.max_frames, workers, chunk)
    return SimResult(spec.code_id, dec.label, dec.size, float(ebn0_db), frames, errors, seed)


class BracketError(ValueError):
    """Search bounds do not bracket the target BLER."""


@dataclass
class RequiredSnr:
    ebn0_db: float
    precision_db: float
    lo_db: float
    hi_db: float
    evaluations: list[SimResult]

    @property
    def final(self) -> SimResult:
        return self.evaluations[-1]


def required_snr(spec: CodeSpec, dec: DecoderConfig, target_bler: float,
                 bounds: tuple[float, float] = (-2.0, 10.0), tolerance_db: float = 0.05,
                 max_frames: int = 100_000, seed: int = 0, workers: int = 1,
                 chunk: int = DEFAULT_CHUNK) -> RequiredSnr:
    """Eb/N0 at which the BLER crosses ``target_bler``, by bisection.

    At each probe, frames run until the 95% interval excludes the target or
    ``max_frames`` is hit; the bracket then moves on the side of the point
    estimate.  The result interpolates log-BLER linearly between the final
    bracket ends and reports half the bracket width as its precision.
    """
    if not 0 < target_bler < 1:
        raise ValueError(f"target BLER must lie in (0, 1), got {target_bler}")
    lo, hi = map(float, bounds)
    if not lo < hi:
        raise ValueError(f"invalid bounds {bounds}")

    def probe(snr):
        def done(f, e):
            a, b = wilson_interval(e, f)
            return not a <= target_bler <= b
        frames, errors = _simulate(spec, dec, snr, seed, done, max_frames, workers, chunk)
        return SimResult(spec.code_id, dec.label, dec.size, snr, frames, errors, seed)

    evals = []
    r_lo, r_hi = probe(lo), probe(hi)
    evals += [r_lo, r_hi]
    if not r_lo.bler > target_bler:
        raise BracketError(f"BLER {r_lo.bler:.3g} at {lo} dB already below target {target_bler}")
    if not r_hi.bler < target_bler:
        raise BracketError(f"BLER {r_hi.bler:.3g} at {hi} dB still above target {target_bler}")
    while (hi - lo) / 2 > tolerance_db:
        mid = (lo + hi) / 2
        r = probe(mid)
        evals.append(r)
        if r.bler > target_bler:
            lo, r_lo = mid, r
        else:
            hi, r_hi = mid, r
    # bler at the upper end may be zero; floor it at one error's worth
    b_lo = max(r_lo.bler, 0.5 / r_lo.frames)
    b_hi = max(r_hi.bler, 0.5 / r_hi.frames)
    t = (math.log(b_lo) - math.log(target_bler)) / (math.log(b_lo) - math.log(b_hi))
    t = min(1.0, max(0.0, t))
    return RequiredSnr(lo + t * (hi - lo), (hi - lo) / 2, lo, hi, evals)

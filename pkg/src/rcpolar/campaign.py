"""Simulation campaigns: a JSON manifest describing codes, decoders and SNRs."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterator

from . import __version__
from .construct import CodeSpec, design
from .sim import (CSV_FIELDS, DEFAULT_CHUNK, DecoderConfig, StopRule, ensemble_for,
                  estimate_bler, required_snr)

DEFAULT_SEED = 2024
REQUIRED_SNR_FIELDS = ["code_id", "decoder", "L_or_M", "k", "target_bler", "ebn0_db",
                       "precision_db", "frames", "errors", "bler", "ci_low", "ci_high", "seed"]


@dataclass
class CampaignConfig:
    n: int
    s: list[int]
    beta: float
    k: list[int]
    decoders: list[DecoderConfig]
    ebn0_db: list[float] = field(default_factory=list)
    target_bler: float | None = None
    bounds: tuple[float, float] = (-2.0, 10.0)
    tolerance_db: float = 0.05
    seed: int = DEFAULT_SEED
    min_errors: int = 100
    max_frames: int = 100_000
    chunk_frames: int = DEFAULT_CHUNK

    def __post_init__(self):
        if not self.decoders:
            raise ValueError("campaign lists no decoders")
        if not self.k:
            raise ValueError("campaign lists no code dimensions")
        if self.target_bler is None and not self.ebn0_db:
            raise ValueError("campaign needs an ebn0_db grid or a target_bler")
        if self.target_bler is not None and not 0 < self.target_bler < 1:
            raise ValueError(f"target_bler must lie in (0, 1), got {self.target_bler}")
        if self.chunk_frames < 1:
            raise ValueError("chunk_frames must be positive")
        # validates (n, s, beta, k) up front
        self._specs = [design(self.n, self.s, self.beta, k) for k in self.k]

    @property
    def specs(self) -> list[CodeSpec]:
        return self._specs

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        code = obj.get("code", {})
        try:
            ks = code["k"]
            return cls(
                n=int(code["n"]), s=list(code["s"]), beta=float(code["beta"]),
                k=[int(k) for k in (ks if isinstance(ks, list) else [ks])],
                decoders=[DecoderConfig.from_json(d) for d in obj.get("decoders", [])],
                ebn0_db=[float(x) for x in obj.get("ebn0_db", [])],
                target_bler=obj.get("target_bler"),
                bounds=tuple(obj.get("bounds", (-2.0, 10.0))),
                tolerance_db=float(obj.get("tolerance_db", 0.05)),
                seed=int(obj.get("seed", DEFAULT_SEED)),
                min_errors=int(obj.get("min_errors", 100)),
                max_frames=int(obj.get("max_frames", 100_000)),
                chunk_frames=int(obj.get("chunk_frames", DEFAULT_CHUNK)),
            )
        except KeyError as exc:
            raise ValueError(f"campaign is missing field {exc}") from None

    def to_json(self) -> dict:
        out = {"code": {"n": self.n, "s": self.s, "beta": self.beta, "k": self.k},
               "decoders": [d.to_json() for d in self.decoders], "seed": self.seed,
               "min_errors": self.min_errors, "max_frames": self.max_frames,
               "chunk_frames": self.chunk_frames}
        if self.target_bler is None:
            out["ebn0_db"] = self.ebn0_db
        else:
            out.update(target_bler=self.target_bler, bounds=list(self.bounds),
                       tolerance_db=self.tolerance_db)
        return out


def load_campaign(path: str) -> CampaignConfig:
    with open(path) as fh:
        return CampaignConfig.from_json(json.load(fh))


def sweep_rows(cfg: CampaignConfig, workers: int = 1) -> Iterator[dict]:
    stop = StopRule(cfg.min_errors, cfg.max_frames)
    for spec in cfg.specs:
        for dec in cfg.decoders:
            for snr in cfg.ebn0_db:
                yield estimate_bler(spec, dec, snr, stop, cfg.seed, workers, cfg.chunk_frames).row()


def required_snr_rows(cfg: CampaignConfig, workers: int = 1) -> Iterator[dict]:
    for spec in cfg.specs:
        for dec in cfg.decoders:
            res = required_snr(spec, dec, cfg.target_bler, cfg.bounds, cfg.tolerance_db,
                               cfg.max_frames, cfg.seed, workers, cfg.chunk_frames)
            last = res.final.row()
            yield {"code_id": spec.code_id, "decoder": dec.label, "L_or_M": dec.size,
                   "k": spec.k, "target_bler": cfg.target_bler,
                   "ebn0_db": f"{res.ebn0_db:.4f}", "precision_db": f"{res.precision_db:.4f}",
                   **{k: last[k] for k in ("frames", "errors", "bler", "ci_low", "ci_high", "seed")}}


def manifest(cfg: CampaignConfig) -> dict:
    """Campaign plus resolved codes and ensemble provenance, enough to re-run."""
    ensembles = {}
    for spec in cfg.specs:
        for dec in cfg.decoders:
            ens = ensemble_for(spec, dec, cfg.seed)
            if ens is not None:
                ensembles[f"{spec.code_id}/{dec.label}-{dec.size}"] = ens.to_json()
    return {"version": __version__, "campaign": cfg.to_json(),
            "codes": [s.to_json() for s in cfg.specs], "ensembles": ensembles}


def write_csv(rows, fields, fh) -> None:
    out = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    out.writeheader()
    for row in rows:
        out.writerow(row)
        fh.flush()


def run_to_string(cfg: CampaignConfig, workers: int = 1) -> str:
    buf = io.StringIO()
    if cfg.target_bler is None:
        write_csv(sweep_rows(cfg, workers), CSV_FIELDS, buf)
    else:
        write_csv(required_snr_rows(cfg, workers), REQUIRED_SNR_FIELDS, buf)
    return buf.getvalue()

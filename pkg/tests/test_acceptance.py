"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible without ``-s``).
Criterion 8 and 9 run Monte-Carlo simulations and take about a minute.
"""
import itertools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from oracles import ml_decode
from rcpolar import gf2, symmetry
from rcpolar.aed import ae_sc_decode, build_ensemble
from rcpolar.bitindex import block_weights
from rcpolar.cli import main
from rcpolar.codec import encode, generator_matrix, sc_decode, scl_decode
from rcpolar.construct import achievable_dimensions, design, symmetric_beta_values, weight_table
from rcpolar.order import SymmetricOrder, complies_symmetric, upset
from rcpolar.sim import (ChannelPoint, DecoderConfig, StopRule, estimate_bler, required_snr,
                         transmit)
from rcpolar.symmetry import all_orbits, orbit, orbit_size, permute, sample_blta, to_symbol_permutation

BETA_GRID = [round(1.02 + 0.02 * t, 2) for t in range(50)]
PROFILES = {6: ([1, 1, 1, 3], 1.1), 7: ([1, 1, 1, 4], 1.1), 8: ([1, 1, 1, 1, 4], 1.122),
            9: ([1, 1, 1, 1, 1, 4], 1.134), 10: ([1, 1, 1, 1, 1, 1, 4], 1.14)}
N64 = dict(n=6, s=[1, 1, 1, 3], beta=1.1, K=32)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        info = {}
        start = time.perf_counter()
        ok = False
        try:
            yield info
            ok = True
        finally:
            detail = "; ".join(f"{k}={v}" for k, v in info.items())
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
                      f" ({time.perf_counter() - start:.2f} s){'  ' + detail if detail else ''}")
    return run


def random_profile(n, rng):
    cuts = sorted(rng.choice(np.arange(1, n), size=rng.integers(0, n), replace=False)) if n > 1 else []
    return np.diff([0, *cuts, n]).astype(int).tolist()


def noisy_frames(spec, frames, ebn0_db, seed):
    rng = np.random.default_rng(seed)
    x = encode(spec, rng.integers(0, 2, size=(frames, spec.k), dtype=np.uint8))
    return x, transmit(x, ChannelPoint(ebn0_db, spec.rate), rng)


def test_criterion_1_n4_orbit_groups(criterion):
    with criterion(1, "n=4, s=[2,2] orbit groups") as info:
        expected = [[0], [1, 2], [3], [4, 8], [5, 6, 9, 10], [7, 11], [12], [13, 14], [15]]
        best = math.inf
        for _ in range(5):
            symmetry._all_orbits.cache_clear()
            t0 = time.perf_counter()
            got = all_orbits(4, [2, 2])
            best = min(best, time.perf_counter() - t0)
        info["uncached_ms"] = f"{1e3 * best:.3f}"
        assert sorted(list(o.indices) for o in got) == expected
        assert best < 1e-3


def test_criterion_2_n5_symmetric_hasse(criterion):
    with criterion(2, "n=5, s=[1,1,3] orbits and cover graph") as info:
        order = SymmetricOrder(5, (1, 1, 3))
        groups = [list(o.indices) for o in order.orbits]
        assert groups == [[0], [1], [2], [3], [4, 8, 16], [5, 9, 17], [6, 10, 18], [7, 11, 19],
                          [12, 20, 24], [13, 21, 25], [14, 22, 26], [15, 23, 27], [28], [29],
                          [30], [31]]
        edges = order.edges_by_rep()
        info["edges"] = len(edges)
        assert edges == {
            (0, 1), (1, 2), (2, 3), (2, 4), (3, 5), (4, 5), (5, 6), (6, 7), (6, 12), (7, 13),
            (12, 13), (13, 14), (14, 15), (14, 28), (15, 29), (28, 29), (29, 30), (30, 31)}


def test_criterion_3_orbit_size_formula(criterion):
    with criterion(3, "orbit sizes equal the binomial product, n<=10") as info:
        rng = np.random.default_rng(3)
        profiles = [random_profile(n, rng) for n in rng.integers(1, 11, size=50)]
        profiles += [[1] * n for n in range(1, 11)] + [[n] for n in range(1, 11)]
        checked = 0
        t0 = time.perf_counter()
        for s in profiles:
            n = sum(s)
            keys = [tuple(block_weights(i, s)) for i in range(1 << n)]
            counts = {}
            for key in keys:
                counts[key] = counts.get(key, 0) + 1
            for i in range(1 << n):
                formula = math.prod(math.comb(b, w) for b, w in zip(s, keys[i]))
                members = orbit(i, s).indices
                assert orbit_size(i, s) == formula == len(members) == counts[keys[i]]
                assert all(keys[j] == keys[i] for j in members)
                checked += 1
        elapsed = time.perf_counter() - t0
        info["indices"] = checked
        assert elapsed < 10


def test_criterion_4_weight_monotonicity(criterion):
    with criterion(4, "symmetric beta values and weights are monotone") as info:
        for beta in BETA_GRID:
            for m in range(1, 5):
                for sizes in itertools.product(range(1, 5), repeat=m):
                    assert np.all(np.diff(symmetric_beta_values(sizes, beta)) >= 0)
        pairs = 0
        for n in range(1, 9):
            ups = [np.array(sorted(upset(i, n))) for i in range(1 << n)]
            for cuts in itertools.product([0, 1], repeat=n - 1):
                s = np.diff([0, *[l + 1 for l, c in enumerate(cuts) if c], n]).tolist()
                for beta in BETA_GRID[::10]:
                    w = weight_table(n, s, beta)
                    for i in range(1 << n):
                        assert np.all(w[ups[i]] >= w[i] - 1e-12)
                        pairs += len(ups[i])
        info["pairs"] = pairs


def test_criterion_5_designs_symmetric_and_closed(criterion):
    with criterion(5, "random designs comply and are closed under BLTA(s)") as info:
        t0 = time.perf_counter()
        rng = np.random.default_rng(5)
        designs = []
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            s = random_profile(n, rng)
            spec = design(n, s, float(rng.choice(BETA_GRID)), int(rng.integers(1, (1 << n) + 1)))
            assert complies_symmetric(spec.info_set, s)
            designs.append(spec)
        for spec in designs[:50]:
            G = generator_matrix(spec.n)[list(spec.info_set)]
            for _ in range(100):
                p = to_symbol_permutation(sample_blta(spec.s, rng))
                cw = encode(spec, rng.integers(0, 2, size=(20, spec.k), dtype=np.uint8))
                assert gf2.in_row_space(G, permute(cw, p)).all()
        elapsed = time.perf_counter() - t0
        info["designs"] = len(designs)
        assert elapsed < 60


def test_criterion_6_dimension_granularity(criterion):
    with criterion(6, "achievable dimensions step by at most 6") as info:
        worst = {}
        for n, (s, beta) in PROFILES.items():
            dims = achievable_dimensions(n, s, beta)
            assert dims[-1] == 1 << n
            worst[n] = int(np.max(np.diff([0, *dims])))
            assert worst[n] <= 6
        info["max_step"] = worst


def test_criterion_7_decoder_consistency(criterion):
    with criterion(7, "SCL(1)=SC, full-list SCL=ML, AE-SC(M=1)=SC") as info:
        spec = design(N64["n"], N64["s"], N64["beta"], N64["K"])
        _, llr = noisy_frames(spec, 10_000, 2.5, 71)
        sc = sc_decode(spec, llr)[1]
        assert np.array_equal(scl_decode(spec, llr, 1), sc)
        assert np.array_equal(ae_sc_decode(spec, llr, build_ensemble(spec, 1)), sc)
        for K in range(1, 9):
            small = design(3, [1, 1, 1], 1.2, K)
            book = encode(small, np.array(list(itertools.product([0, 1], repeat=small.k))))
            _, llr3 = noisy_frames(small, 1000, 0.0, 72 + K)
            assert np.array_equal(scl_decode(small, llr3, 2 ** small.k), ml_decode(book, llr3))
        info["frames"] = "1e4 (N=64), 8x1e3 (N=8)"


def test_criterion_8_ensemble_gain(criterion):
    with criterion(8, "AE-SC M=8 beats SC; required SNR non-increasing in M") as info:
        spec = design(N64["n"], N64["s"], N64["beta"], N64["K"])
        req = {}
        for M in (1, 2, 4, 8):
            dec = DecoderConfig("sc") if M == 1 else DecoderConfig("ae-sc", M)
            req[M] = required_snr(spec, dec, 1e-2, bounds=(0.0, 8.0), tolerance_db=0.05,
                                  max_frames=100_000, seed=2024).ebn0_db
        info["required_snr_db"] = {M: round(v, 3) for M, v in req.items()}
        snr = req[1]
        fixed = StopRule(min_errors=10**9, max_frames=100_000)
        sc = estimate_bler(spec, DecoderConfig("sc"), snr, fixed, seed=8)
        ae = estimate_bler(spec, DecoderConfig("ae-sc", 8), snr, fixed, seed=8)
        info["bler_at_sc_point"] = f"SC {sc.bler:.4f} vs AE-SC {ae.bler:.4f} @ {snr:.3f} dB"
        assert sc.frames == ae.frames == 100_000
        assert 0.005 < sc.bler < 0.02
        assert ae.ci95[1] < sc.ci95[0]
        assert req[2] <= req[1] and req[4] <= req[2] and req[8] <= req[4]


def test_criterion_9_worker_independence(criterion, tmp_path):
    with criterion(9, "campaign CSV identical for 1 and 8 workers") as info:
        campaign = tmp_path / "c.json"
        campaign.write_text(
            '{"code": {"n": 6, "s": [1, 1, 1, 3], "beta": 1.1, "k": [24, 32]},'
            ' "decoders": [{"kind": "sc"}, {"kind": "ae-sc", "size": 4},'
            ' {"kind": "ca-scl", "size": 8, "crc": "crc6"}],'
            ' "ebn0_db": [1.5, 3.0], "seed": 99, "min_errors": 40, "max_frames": 4000,'
            ' "chunk_frames": 250}')
        bodies = []
        for workers in (1, 8):
            out = tmp_path / f"w{workers}.csv"
            assert main(["simulate", str(campaign), "--out", str(out),
                         "--workers", str(workers)]) == 0
            bodies.append(out.read_bytes())
        info["rows"] = bodies[0].count(b"\n") - 1
        assert bodies[0] == bodies[1]

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcpolar.construct import (CodeSpec, achievable_dimensions, beta_design, beta_weight, design,
                               symmetric_beta_values, symmetric_weight, verify, weight_table,
                               weight_table_csv)
from rcpolar.order import complies_symmetric, upset
from rcpolar.symmetry import all_orbits, orbit

BETAS = [round(1.05 + 0.05 * t, 2) for t in range(20)]


def test_beta_weight_examples():
    assert all(beta_weight(i, 5, 2.0) == i for i in range(32))
    assert beta_weight(0, 4, 1.3) == 0
    assert beta_weight(5, 4, 1.1) == pytest.approx(2.21, abs=1e-12)
    with pytest.raises(ValueError):
        beta_weight(3, 4, 1.0)
    with pytest.raises(ValueError):
        beta_weight(3, 4, 2.5)


def test_symmetric_beta_values_examples():
    assert np.allclose(symmetric_beta_values([1] * 5, 1.3), 1.3 ** np.arange(5))
    mean = (1.1**2 + 1.1**3 + 1.1**4) / 3
    assert mean == pytest.approx(1.3350333333333335)
    assert np.allclose(symmetric_beta_values([1, 1, 3], 1.1), [1.0, 1.1, mean, mean, mean])
    assert symmetric_weight(31, [1, 1, 3], 1.1) == pytest.approx(beta_weight(31, 5, 1.1))


def test_symmetric_weight_equality_and_compatibility():
    s = [2, 2]
    vals = {symmetric_weight(i, s, 1.2) for i in (5, 6, 9, 10)}
    assert max(vals) - min(vals) < 1e-12
    for s in ([2, 2], [1, 1, 3], [1, 2, 3], [4, 2]):
        n = sum(s)
        for o in all_orbits(n, s):
            plain = [beta_weight(i, n, 1.15) for i in o]
            w = symmetric_weight(o.rep, s, 1.15)
            assert min(plain) - 1e-12 <= w <= max(plain) + 1e-12
    assert symmetric_weight(0, [1, 3], 1.5) == 0


@pytest.mark.parametrize("beta", BETAS)
def test_block_beta_values_monotone(beta):
    for sizes in itertools.chain.from_iterable(
            itertools.product(range(1, 5), repeat=m) for m in range(1, 4)):
        vals = symmetric_beta_values(sizes, beta)
        assert np.all(np.diff(vals) >= 0)


@pytest.mark.parametrize("n", range(2, 9))
def test_weights_monotone_along_order(n):
    rng = np.random.default_rng(n)
    for _ in range(3):
        cuts = sorted(rng.choice(np.arange(1, n), size=rng.integers(0, n - 1), replace=False))
        s = np.diff([0, *cuts, n]).tolist()
        beta = float(rng.choice(BETAS))
        w = weight_table(n, s, beta)
        for i in range(1 << n):
            for j in upset(i, n):
                assert w[i] <= w[j] + 1e-12


def test_design_examples():
    assert design(4, [2, 2], 1.2, 16).info_set == tuple(range(16))
    spec = design(5, [1, 1, 3], 1.1, 4)
    assert spec.info_set == (15, 23, 27, 29, 30, 31)
    assert spec.k == 6 and spec.requested_k == 4
    spec = design(6, [1, 1, 1, 3], 1.1, 32)
    assert spec.k >= 32 and complies_symmetric(spec.info_set, spec.s)


def test_design_rejects_bad_parameters():
    for K in (0, 33, -1):
        with pytest.raises(ValueError):
            design(5, [1, 1, 3], 1.1, K)
    with pytest.raises(ValueError):
        design(5, [1, 3], 1.1, 4)
    with pytest.raises(ValueError):
        design(5, [1, 1, 3], 0.9, 4)


def test_ties_admit_whole_orbit():
    # 1.1**2..1.1**4 average is irrational-ish; all three members must come in together
    w = weight_table(5, [1, 1, 3], 1.1)
    for o in all_orbits(5, [1, 1, 3]):
        assert np.ptp(w[list(o.indices)]) < 1e-12


def test_achievable_dimensions():
    assert achievable_dimensions(4, [1] * 4, 1.2) == list(range(1, 17))
    dims = achievable_dimensions(4, [2, 2], 1.2)
    assert set(np.diff([0, *dims])) <= {1, 2, 4}
    for n in range(6, 11):
        s = [1] * (n - 4) + [4]
        dims = achievable_dimensions(n, s, 1.1)
        assert max(np.diff([0, *dims])) <= math.comb(4, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7), st.sampled_from(BETAS), st.data())
def test_design_returns_smallest_achievable_and_nests(n, beta, data):
    s = data.draw(st.sampled_from([[1] * n, [1] * (n - 2) + [2], [1] * (n - 3) + [3], [n - 1, 1]]))
    dims = achievable_dimensions(n, s, beta)
    K1 = data.draw(st.integers(1, 1 << n))
    K2 = data.draw(st.integers(K1, 1 << n))
    a, b = design(n, s, beta, K1), design(n, s, beta, K2)
    assert a.k == min(d for d in dims if d >= K1)
    assert set(a.info_set) <= set(b.info_set)
    assert complies_symmetric(a.info_set, s)


def test_orbits_share_hamming_weight():
    for o in all_orbits(7, [1, 2, 4]):
        assert len({bin(i).count("1") for i in o}) == 1


def test_verify_reports():
    spec = design(5, [1, 1, 3], 1.1, 10)
    rep = verify(spec)
    assert rep["complies"] and rep["is_stabilized"] and rep["complies_symmetric"]
    tampered = CodeSpec(5, tuple(i for i in spec.info_set if i != 27), s=(1, 1, 3))
    rep = verify(tampered)
    assert not rep["is_stabilized"] and not rep["complies_symmetric"]
    assert any(r["status"] == "split" for r in rep["orbits"])


def test_plain_beta_tie_break_splits_orbit():
    # K=4 cuts through orbit {15,23,27} under plain beta-expansion
    plain = beta_design(5, 1.1, 4)
    assert len(plain.info_set) == 4
    rep = verify(plain, s=[1, 1, 3])
    assert rep["complies"]
    assert not rep["complies_symmetric"]


def test_codespec_json_round_trip():
    spec = design(6, [1, 1, 1, 3], 1.1, 20)
    obj = json.loads(spec.dumps())
    assert set(obj) == {"n", "requested_k", "k", "s", "beta", "info_set"}
    assert obj["info_set"] == sorted(obj["info_set"])
    again = CodeSpec.from_json(obj)
    assert again == spec
    obj["k"] = 3
    with pytest.raises(ValueError):
        CodeSpec.from_json(obj)


def test_weight_csv():
    text = weight_table_csv(3, [1, 2], 1.5)
    lines = text.strip().split("\n")
    assert lines[0] == "index,binary_lsb_first,orbit_id,weight"
    assert lines[2].startswith("1,100,1,")
    assert len(lines) == 9

import math

import pytest

import cesaro_ca as cc


def test_closed_form_matches_iterate():
    g = cc.GroupSpec(2, [2])
    params = cc.AutomatonParams(1, 3, g)
    word = [1, 2, 3, 0, 1, 1, 2, 3, 0, 2, 1]
    out = cc.iterate(word, 5, params)
    assert out == [cc.apply_closed_form(word, 5, i, params) for i in range(len(out))]


def test_lucas_against_math_comb():
    for m in range(60):
        for k in range(m + 1):
            assert cc.lucas_binomial(m, k, 3) == math.comb(m, k) % 3


def test_markov_beta_and_regenerations():
    k = cc.KernelSpec.markov_stay(cc.GroupSpec(2, [1]), 0.7)
    assert k.beta() == pytest.approx(0.36, abs=1e-12)
    s = cc.sample_path(k, [], 50000, 3)
    times = s["regenerations"]
    gap = (times[-1] - times[0]) / (len(times) - 1)
    assert gap == pytest.approx(1 / 0.36, rel=0.05)


def test_exact_cesaro_bernoulli():
    g = cc.GroupSpec(2, [1])
    k = cc.KernelSpec.product(g, [0.7, 0.3])
    r = cc.cesaro_scan(k, [], cc.AutomatonParams(1, 1, g), [2**k for k in range(1, 11)])
    assert r["tv"][-1] < 0.02
    assert r["tv"][-1] < r["tv"][0]


def test_noncoprime_rejected():
    with pytest.raises(cc.DomainError):
        cc.AutomatonParams(2, 1, cc.GroupSpec(2, [1]))


def test_cli_roundtrip_and_config_error():
    code, out, _ = cc.run("verify", "", seed=2)
    assert code == 0 and "FAIL" not in out
    with pytest.raises(cc.ConfigError):
        cc.run("simulate", "[simulate]\nN = x\n")

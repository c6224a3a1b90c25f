"""Sampling the nested model and the multi-view variant: parameter
validation, exact noise-free structure, moment checks, determinism, and the
signal-strength conversions."""

import math

import numpy as np
import pytest

from nested_spectra.model import (GeneralParams, MultiViewParams,
                                  PlantedSignals, ShapeRatios, beta_from_rho,
                                  beta_from_varrho, derive_seed, rho_from_beta,
                                  sample_general, sample_multiview, varrho)
from nested_spectra.tensor_core import outer_vvv


def test_shape_ratios_from_dims():
    c = ShapeRatios.from_dims(600, 400, 200)
    assert abs(c.c1 - 0.5) < 1e-15
    assert abs(c.c2 - 1 / 3) < 1e-15
    assert abs(c.c3 - 1 / 6) < 1e-15
    assert abs(c.c1_bar - 0.6) < 1e-14
    assert abs(c.c2_bar - 0.4) < 1e-14


def test_shape_ratios_validation():
    with pytest.raises(ValueError):
        ShapeRatios(0.5, 0.3, 0.1)  # does not sum to 1
    with pytest.raises(ValueError):
        ShapeRatios(1.0, 0.0, 0.0)  # not interior


def test_general_params_exactly_one_strength():
    with pytest.raises(ValueError):
        GeneralParams(n1=10, n2=10, n3=10, beta_M=1.0)
    with pytest.raises(ValueError):
        GeneralParams(n1=10, n2=10, n3=10, beta_M=1.0, beta_T=1.0, rho_T=1.0)


def test_general_params_resolves_rho_to_beta():
    p = GeneralParams(n1=600, n2=400, n3=200, beta_M=1.5, rho_T=2.0)
    assert math.isclose(p.beta_T, 3.398088489694245, rel_tol=1e-12)
    assert math.isclose(p.beta_T ** 2, 11.547005383792515, rel_tol=1e-12)
    assert math.isclose(p.rho_T, 2.0, rel_tol=1e-12)
    assert p.n_M == 1000 and p.n_T == 1200
    assert math.isclose(p.varsigma2, p.beta_T ** 2 + 1000 / 1200, rel_tol=1e-15)


def test_strength_conversions_round_trip():
    for n1, n2, n3 in [(600, 400, 200), (30, 20, 10), (50, 50, 50)]:
        for val in (0.1, 1.0, 2.5):
            p = GeneralParams(n1=n1, n2=n2, n3=n3, beta_M=1.0, rho_T=val)
            assert math.isclose(rho_from_beta(p), val, rel_tol=1e-12)
            q = GeneralParams(n1=n1, n2=n2, n3=n3, beta_M=1.0, beta_T=val)
            assert math.isclose(beta_from_rho(q), val, rel_tol=1e-12)


def test_varrho_round_trip():
    bt = beta_from_varrho(600, 400, 200, 3.0, 4.0)
    p = GeneralParams(n1=600, n2=400, n3=200, beta_M=3.0, beta_T=bt)
    assert math.isclose(varrho(p), 4.0, rel_tol=1e-10)


def test_derive_seed_is_deterministic_and_distinct():
    a = derive_seed(42, 0)
    assert a == derive_seed(42, 0)
    seen = {derive_seed(42, i) for i in range(100)}
    assert len(seen) == 100
    assert all(0 <= s < 2 ** 64 for s in seen)
    assert derive_seed(42, 1, 2) != derive_seed(42, 2, 1)


def test_sample_general_noise_free_is_exact_rank_one():
    p = GeneralParams(n1=12, n2=10, n3=8, beta_M=1.5, beta_T=2.0, seed=3)
    t, m, sig = sample_general(p, noise=False)
    np.testing.assert_allclose(m, 1.5 * np.outer(sig.x, sig.y),
                               rtol=0, atol=1e-12)
    np.testing.assert_allclose(t, 3.0 * outer_vvv(sig.x, sig.y, sig.z),
                               rtol=0, atol=1e-12)
    for v in (sig.x, sig.y, sig.z):
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_sample_general_accepts_planted_signals():
    n1, n2, n3 = 6, 5, 4
    sig = PlantedSignals(x=np.eye(n1)[0], y=np.eye(n2)[1], z=np.eye(n3)[2])
    p = GeneralParams(n1=n1, n2=n2, n3=n3, beta_M=2.0, beta_T=1.0, seed=0)
    t, m, out = sample_general(p, signals=sig, noise=False)
    assert out is sig
    assert abs(m[0, 1] - 2.0) < 1e-12
    assert abs(t[0, 1, 2] - 2.0) < 1e-12
    assert abs(np.abs(t).sum() - 2.0) < 1e-12


def test_sample_general_is_bit_reproducible():
    p = GeneralParams(n1=15, n2=12, n3=9, beta_M=1.0, rho_T=1.0, seed=11)
    t1, m1, s1 = sample_general(p)
    t2, m2, s2 = sample_general(p)
    assert np.array_equal(t1, t2) and np.array_equal(m1, m2)
    assert np.array_equal(s1.x, s2.x)
    q = GeneralParams(n1=15, n2=12, n3=9, beta_M=1.0, rho_T=1.0, seed=12)
    t3, _, _ = sample_general(q)
    assert not np.array_equal(t1, t3)


def test_sample_general_second_moment():
    """E||T||^2 = beta_T^2 (beta_M^2 + n1 n2/n_M) + n1 n2 n3/n_T, mean over
    20 seeds within 5%."""
    n1 = n2 = n3 = 20
    beta_M, beta_T = 1.5, 1.0
    expect = beta_T ** 2 * (beta_M ** 2 + n1 * n2 / 40) + 8000 / 60
    vals = []
    for seed in range(20):
        p = GeneralParams(n1=n1, n2=n2, n3=n3, beta_M=beta_M, beta_T=beta_T,
                          seed=seed)
        t, _, _ = sample_general(p)
        vals.append(float(np.sum(t * t)))
    assert abs(np.mean(vals) - expect) < 0.05 * expect


def test_multiview_from_norms():
    mv = MultiViewParams.from_norms(150, 300, 60, 2.0, 1.5)
    assert math.isclose(mv.mu_norm, 2.0, rel_tol=1e-12)
    assert math.isclose(mv.h_norm, 1.5, rel_tol=1e-12)
    assert mv.n_tot == 510
    assert math.isclose(mv.rho, 0.69834626081908679, rel_tol=1e-12)
    assert math.isclose(MultiViewParams.from_norms(150, 300, 60, 2.0, 0.5).rho,
                        0.077594028979898533, rel_tol=1e-12)
    c = mv.c
    assert math.isclose(c.c1_bar, 1 / 3, rel_tol=1e-14)
    assert math.isclose(c.c2_bar, 2 / 3, rel_tol=1e-14)


def test_multiview_labels_balanced():
    mv = MultiViewParams.from_norms(10, 20, 4, 1.0, 1.0)
    labels = mv.labels()
    assert labels.shape == (20,)
    assert np.all(labels[:10] == 1) and np.all(labels[10:] == -1)
    with pytest.raises(ValueError):
        MultiViewParams.from_norms(10, 21, 4, 1.0, 1.0)  # odd n, no n_pos


def test_multiview_sampling_moments():
    """E||X||^2 = |mu|^2 |h|^2 + |h|^2 pn/(p+n) + pnm/n_tot over 20 seeds."""
    p_, n_, m_ = 30, 60, 12
    mu, h = 2.0, 1.5
    expect = (mu * h) ** 2 + h ** 2 * p_ * n_ / (p_ + n_) + p_ * n_ * m_ / 102
    vals = []
    for seed in range(20):
        mv = MultiViewParams.from_norms(p_, n_, m_, mu, h, seed=seed)
        x, labels = sample_multiview(mv)
        assert x.shape == (p_, n_, m_)
        assert np.array_equal(labels, mv.labels())
        vals.append(float(np.sum(x * x)))
    assert abs(np.mean(vals) - expect) < 0.05 * expect


def test_multiview_pure_noise_entry_variance():
    mv = MultiViewParams.from_norms(30, 60, 12, 0.0, 0.0, seed=5)
    x, _ = sample_multiview(mv)
    # entries are iid N(0, 1/n_tot); 5 standard errors of the mean square
    second = float(np.mean(x * x)) * 102
    assert abs(second - 1.0) < 5 * math.sqrt(2 / x.size)


def test_multiview_noise_free_structure():
    mv = MultiViewParams.from_norms(8, 6, 4, 2.0, 1.5, seed=9)
    x, labels = sample_multiview(mv, noise=False)
    ybar = labels / math.sqrt(6)
    expect = np.einsum("i,j,k->ijk", mv.mu, ybar, mv.h)
    np.testing.assert_allclose(x, expect, rtol=0, atol=1e-12)


def test_multiview_general_equivalent():
    mv = MultiViewParams.from_norms(150, 300, 60, 2.0, 1.5, seed=4)
    g = mv.general_equivalent()
    assert (g.n1, g.n2, g.n3) == (150, 300, 60)
    assert math.isclose(g.beta_M, 2.0, rel_tol=1e-12)
    assert math.isclose(g.beta_T, 1.5, rel_tol=1e-12)
    assert math.isclose(g.varsigma2, 1.5 ** 2 + 450 / 510, rel_tol=1e-12)
    assert math.isclose(rho_from_beta(g), mv.rho, rel_tol=1e-12)

"""Unfolding, weighted-mean (oracle), and rank-one tensor estimators, plus
alignment and clustering-accuracy utilities."""

import math

import numpy as np
import pytest
from scipy import stats

from nested_spectra.estimators import (alignment, cluster_accuracy,
                                       oracle_estimate, tensor_rank1_estimate,
                                       unfolding_estimate)
from nested_spectra.model import (GeneralParams, MultiViewParams,
                                  PlantedSignals, sample_general,
                                  sample_multiview)
from nested_spectra.tensor_core import inner, outer_vvv
from nested_spectra.theory import mp_law


def noise_free_tensor(seed=0, dims=(8, 7, 6)):
    rng = np.random.default_rng(seed)
    u, v, w = (rng.standard_normal(d) for d in dims)
    u, v, w = (a / np.linalg.norm(a) for a in (u, v, w))
    return 3.0 * outer_vvv(u, v, w), (u, v, w)


def test_unfolding_recovers_noise_free_signal():
    t, (u, v, w) = noise_free_tensor()
    for mode, truth in ((1, u), (2, v), (3, w)):
        est = unfolding_estimate(t, mode)
        assert alignment(est.vector, truth) > 1 - 1e-10
        assert est.method == f"unfold{mode}"


def test_unfolding_spectrum_exposed():
    t, _ = noise_free_tensor()
    est = unfolding_estimate(t, 2)
    # rank one: top eigenvalue equals ||T||^2, the rest vanish
    assert abs(est.spectrum.top_eigenvalue - 9.0) < 1e-9
    assert np.all(np.abs(est.spectrum.eigenvalues[:-1]) < 1e-9)


def test_unfolding_estimate_permutation_equivariant():
    rng = np.random.default_rng(401)
    t = rng.standard_normal((6, 5, 4))
    perm = rng.permutation(5)
    est = unfolding_estimate(t, 2)
    est_p = unfolding_estimate(t[:, perm, :], 2)
    assert abs(alignment(est_p.vector, est.vector[perm]) - 1.0) < 1e-10


def test_oracle_estimate_slice_selection():
    """With z = e1 and unit scaling, the oracle Gram is the Gram of the first
    frontal slice."""
    rng = np.random.default_rng(402)
    t = rng.standard_normal((6, 5, 4))
    z = np.eye(4)[0]
    est = oracle_estimate(t, z)
    g = t[:, :, 0].T @ t[:, :, 0]
    top = np.linalg.eigh(g)[1][:, -1]
    assert abs(alignment(est.vector, top) - 1.0) < 1e-12


def test_oracle_estimate_validates_z():
    t = np.zeros((3, 3, 3))
    with pytest.raises(ValueError):
        oracle_estimate(t, np.ones(3))  # not unit norm
    with pytest.raises(ValueError):
        oracle_estimate(t, np.ones(4) / 2.0)  # wrong length


def test_oracle_estimate_recovers_noise_free_signal():
    t, (u, v, w) = noise_free_tensor()
    est = oracle_estimate(t, w)
    assert alignment(est.vector, v) > 1 - 1e-10
    assert est.method == "oracle"
    est_scaled = oracle_estimate(t, w, varsigma2=2.0)
    assert est_scaled.spectrum.centering == "oracle"
    assert abs(est_scaled.spectrum.top_eigenvalue * 2.0
               - est.spectrum.top_eigenvalue) < 1e-9


def test_oracle_bulk_matches_mp_law():
    """At beta_M = 0 the scaled oracle Gram spectrum follows the MP law."""
    pooled = []
    for seed in range(2):
        p = GeneralParams(n1=300, n2=200, n3=100, beta_M=0.0,
                          beta_T=math.sqrt(2 / 3), seed=seed)
        t, _, sig = sample_general(p)
        est = oracle_estimate(t, sig.z, varsigma2=p.varsigma2)
        pooled.append(est.spectrum.eigenvalues)
    law = mp_law(p.c)
    ks = stats.kstest(np.concatenate(pooled), law.cdf).statistic
    assert ks < 0.05, f"KS {ks:.4f} vs MP law"


def test_hopm_recovers_noise_free_signal():
    t, (u, v, w) = noise_free_tensor()
    eu, ev, ew = tensor_rank1_estimate(t)
    assert alignment(eu.vector, u) > 1 - 1e-10
    assert alignment(ev.vector, v) > 1 - 1e-10
    assert alignment(ew.vector, w) > 1 - 1e-10
    assert abs(eu.objective - 3.0) < 1e-9
    assert eu.method == "tensor"


def test_hopm_objective_monotone_across_sweeps():
    """Extending the sweep budget never lowers the contraction objective;
    100 random tensors."""
    rng = np.random.default_rng(403)
    for trial in range(100):
        t = rng.standard_normal((5, 6, 7))
        prev = -np.inf
        for iters in (1, 2, 3, 5, 8):
            _, _, ew = tensor_rank1_estimate(t, max_iters=iters, tol=1e-14)
            assert ew.objective >= prev - 1e-10, f"trial {trial}"
            prev = ew.objective


def test_hopm_objective_consistent_with_contraction():
    rng = np.random.default_rng(404)
    for _ in range(10):
        t = rng.standard_normal((5, 6, 7))
        eu, ev, ew = tensor_rank1_estimate(t)
        direct = inner(t, outer_vvv(eu.vector, ev.vector, ew.vector))
        assert abs(direct - eu.objective) < 1e-10
        assert eu.objective == ev.objective == ew.objective
        assert eu.iterations_used == ev.iterations_used <= 100


def test_hopm_random_init_reproducible():
    rng = np.random.default_rng(405)
    t = rng.standard_normal((5, 5, 5))
    a = tensor_rank1_estimate(t, init="random", seed=7)
    b = tensor_rank1_estimate(t, init="random", seed=7)
    assert np.array_equal(a[0].vector, b[0].vector)
    assert a[0].method == "tensor"


def test_hopm_accepts_explicit_init():
    t, (u, v, w) = noise_free_tensor()
    est = tensor_rank1_estimate(t, init=(u, v, w), max_iters=1)
    assert alignment(est[1].vector, v) > 1 - 1e-10


def test_hopm_degenerate_contraction_raises():
    with pytest.raises(ArithmeticError):
        tensor_rank1_estimate(np.zeros((4, 4, 4)))


def test_hopm_validates_arguments():
    t = np.ones((3, 3, 3))
    with pytest.raises(ValueError):
        tensor_rank1_estimate(t, max_iters=0)
    with pytest.raises(ValueError):
        tensor_rank1_estimate(t, tol=0.0)
    with pytest.raises(ValueError):
        tensor_rank1_estimate(t, init="nonsense")


def test_alignment_basics():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert alignment(e1, e1) == 1.0
    assert alignment(e1, -e1) == 1.0  # sign-free
    assert alignment(e1, e2) == 0.0
    with pytest.raises(ValueError):
        alignment(e1, np.eye(4)[0])
    with pytest.raises(ValueError):
        alignment(2.0 * e1, e1)


def test_cluster_accuracy_perfect_and_flipped():
    labels = np.array([1, 1, -1, -1])
    ybar = labels / 2.0
    perfect = cluster_accuracy(ybar, labels)
    assert perfect.accuracy == 1.0
    flipped = cluster_accuracy(-ybar, labels)
    assert flipped.accuracy == 1.0  # global sign is unidentifiable
    assert np.array_equal(np.abs(perfect.predicted_labels), np.ones(4))


def test_cluster_accuracy_validates_labels():
    with pytest.raises(ValueError):
        cluster_accuracy(np.ones(3), np.array([1, 0, -1]))


def test_cluster_accuracy_ties_counted():
    labels = np.array([1, 1, -1, -1])
    yhat = np.array([0.5, 0.0, -0.5, -0.5])
    result = cluster_accuracy(yhat, labels)
    assert result.n_ties == 1
    assert result.accuracy == 1.0  # tie resolves to +1, matching labels here


def test_cluster_accuracy_range_and_chance_level():
    rng = np.random.default_rng(406)
    labels = np.concatenate([np.ones(100), -np.ones(100)])
    accs = []
    for _ in range(50):
        yhat = rng.standard_normal(200)
        yhat /= np.linalg.norm(yhat)
        r = cluster_accuracy(yhat, labels)
        assert 0.5 <= r.accuracy <= 1.0
        accs.append(r.accuracy)
    assert 0.5 <= np.mean(accs) < 0.56  # chance up to the flip-max bias


def test_cluster_accuracy_matches_gaussian_prediction():
    """Synthetic yhat drawn from the asymptotic per-entry law reproduces
    Phi(sqrt(zeta/(1-zeta))) within 0.06."""
    rng = np.random.default_rng(407)
    n, zeta = 400, 0.6
    labels = np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
    ybar = labels / math.sqrt(n)
    expect = stats.norm.cdf(math.sqrt(zeta / (1 - zeta)))
    accs = []
    for _ in range(30):
        yhat = math.sqrt(zeta) * ybar + rng.standard_normal(n) * math.sqrt(
            (1 - zeta) / n)
        accs.append(cluster_accuracy(yhat, labels).accuracy)
    assert abs(np.mean(accs) - expect) < 0.06


def test_cluster_accuracy_residuals_standard_normal():
    """Residuals standardized with the empirical alignment are N(0,1) for
    synthetic draws from the per-entry law."""
    rng = np.random.default_rng(408)
    n, zeta = 500, 0.7
    labels = np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
    ybar = labels / math.sqrt(n)
    pooled = []
    for _ in range(4):
        raw = math.sqrt(zeta) * ybar + rng.standard_normal(n) * math.sqrt(
            (1 - zeta) / n)
        raw /= np.linalg.norm(raw)
        pooled.append(cluster_accuracy(raw, labels).residuals)
    pooled = np.concatenate(pooled)
    assert abs(float(np.mean(pooled))) < 0.1
    assert stats.kstest(pooled, stats.norm.cdf).pvalue > 0.01


def test_estimators_agree_on_strong_multiview_signal():
    mv = MultiViewParams.from_norms(40, 60, 12, 5.0, 3.0, seed=17)
    x, labels = sample_multiview(mv)
    acc_u = cluster_accuracy(unfolding_estimate(x, 2).vector, labels).accuracy
    zdir = mv.h / np.linalg.norm(mv.h)
    acc_o = cluster_accuracy(oracle_estimate(x, zdir).vector, labels).accuracy
    _, ev, _ = tensor_rank1_estimate(x)
    acc_t = cluster_accuracy(ev.vector, labels).accuracy
    assert min(acc_u, acc_o, acc_t) > 0.95

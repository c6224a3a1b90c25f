"""Signal-recovery procedures: unfolding spectral estimator, weighted-mean
estimator with known z, and rank-one tensor approximation by alternating
power iteration, plus alignment and clustering-accuracy measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectra import SpectrumResult, gram, sym_eigen
from .tensor_core import unfold

__all__ = [
    "Estimate",
    "ClusterResult",
    "unfolding_estimate",
    "oracle_estimate",
    "tensor_rank1_estimate",
    "alignment",
    "cluster_accuracy",
]


@dataclass(frozen=True, eq=False)
class Estimate:
    """A unit-norm estimated signal vector.

    `objective` is set by the tensor method only (the attained value of
    <T, u outer v outer w>); `spectrum` is carried by the spectral methods for
    ESD studies.
    """

    vector: np.ndarray
    method: str  # unfold1 | unfold2 | unfold3 | oracle | tensor
    iterations_used: int = 1
    objective: float | None = None
    spectrum: SpectrumResult | None = None


@dataclass(frozen=True, eq=False)
class ClusterResult:
    """Label predictions from a score vector, after resolving the global sign
    ambiguity the better of the two flips."""

    predicted_labels: np.ndarray
    accuracy: float              # in [0.5, 1] by the sign resolution
    raw_alignment: float         # |yhat' ybar|^2
    residuals: np.ndarray        # standardized entries, for normality checks
    n_ties: int                  # zero entries of yhat, classified as +1


def unfolding_estimate(t: np.ndarray, mode: int) -> Estimate:
    """Dominant eigenvector of the mode-`mode` Gram unfold(t) unfold(t)'.

    Exposes the full raw-Gram SpectrumResult; callers wanting the
    centered-scaled spectrum apply the affine transform themselves (it does
    not change eigenvectors).
    """
    sr = sym_eigen(gram(unfold(t, mode)))
    return Estimate(vector=sr.top_eigenvector, method=f"unfold{mode}",
                    spectrum=sr)


def oracle_estimate(t: np.ndarray, z: np.ndarray,
                    varsigma2: float | None = None) -> Estimate:
    """Dominant right singular vector of the weighted slice sum
    Tbar = sum_k z_k T[:, :, k], computed as the top eigenvector of
    Tbar' Tbar.

    When `varsigma2` is given, the exposed spectrum is of (1/varsigma2)
    Tbar' Tbar (the normalization under which the limiting law applies);
    the estimator itself is scale invariant.
    """
    z = np.asarray(z, dtype=np.float64)
    if t.ndim != 3 or z.shape != (t.shape[2],):
        raise ValueError("z must have length n3")
    if abs(np.linalg.norm(z) - 1.0) > 1e-8:
        raise ValueError("z must have unit norm")
    tbar = np.tensordot(t, z, axes=([2], [0]))
    g = tbar.T @ tbar
    if varsigma2 is not None:
        if varsigma2 <= 0:
            raise ValueError(f"varsigma2 must be positive, got {varsigma2}")
        g = g / varsigma2
    sr = sym_eigen(g, centering="oracle" if varsigma2 is not None else "none")
    return Estimate(vector=sr.top_eigenvector, method="oracle", spectrum=sr)


def _normalized(v):
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        return None
    return v / nrm


def tensor_rank1_estimate(t: np.ndarray, init="unfolding", max_iters: int = 100,
                          tol: float = 1e-10, seed: int = 0):
    """Best rank-one approximation argmax <T, u outer v outer w> over unit
    vectors, by alternating power iteration.

    Each sweep updates u, then v, then w; every single-factor update is the
    exact maximizer given the other two, so the objective is nondecreasing
    across sweeps. The objective is recomputed from scratch each sweep (no
    running-value drift). Stops when a sweep gains less than `tol` or after
    `max_iters` sweeps.

    init: "unfolding" (dominant unfolding eigenvectors of all three modes,
    the default), "random" (seeded), or an explicit (u, v, w) triple. A zero
    contraction (degenerate input) triggers one random restart, then an
    ArithmeticError.

    Returns (u_est, v_est, w_est) Estimates sharing the attained objective.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if t.ndim != 3:
        raise ValueError("expected an order-3 tensor")
    u1, u2, u3 = unfold(t, 1), unfold(t, 2), unfold(t, 3)

    def initial(kind):
        if kind == "unfolding":
            return tuple(unfolding_estimate(t, m).vector for m in (1, 2, 3))
        if kind == "random":
            rng = np.random.default_rng(seed)
            vs = (rng.standard_normal(n) for n in t.shape)
            return tuple(v / np.linalg.norm(v) for v in vs)
        u, v, w = kind
        return (np.asarray(u, float), np.asarray(v, float), np.asarray(w, float))

    def sweep_from(u, v, w):
        objective = -np.inf
        for it in range(1, max_iters + 1):
            u = _normalized(u1 @ np.kron(v, w))
            if u is None:
                return None, it
            v = _normalized(u2 @ np.kron(u, w))
            if v is None:
                return None, it
            w = _normalized(u3 @ np.kron(u, v))
            if w is None:
                return None, it
            new_objective = float(u @ (u1 @ np.kron(v, w)))
            if new_objective - objective < tol:
                objective = new_objective
                break
            objective = new_objective
        return (u, v, w, objective), it

    result, iters = sweep_from(*initial(init))
    if result is None:
        result, iters = sweep_from(*initial("random"))
        if result is None:
            raise ArithmeticError("degenerate input: zero contraction even "
                                  "after a random restart")
    u, v, w, objective = result
    return tuple(Estimate(vector=vec, method="tensor", iterations_used=iters,
                          objective=objective) for vec in (u, v, w))


def alignment(a: np.ndarray, b: np.ndarray) -> float:
    """Squared overlap |a'b|^2 of two unit vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    for name, v in (("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise ValueError(f"{name} must have unit norm")
    return float(np.dot(a, b) ** 2)


def cluster_accuracy(yhat: np.ndarray, labels: np.ndarray,
                     zeta: float | None = None) -> ClusterResult:
    """Classify by sign(yhat) and score against +-1 labels, resolving the
    global sign to the better of the two flips.

    Residuals are sqrt(n/(1 - zeta)) * (s*yhat - sqrt(zeta)*ybar) with
    ybar = labels/sqrt(n) and s the sign aligning yhat with ybar; they are
    approximately standard normal entries when the estimator obeys the
    asymptotic per-entry law. By default zeta is the empirical |yhat'ybar|^2
    (better conditioned in finite samples); pass the theoretical zeta to
    standardize with it instead.
    """
    yhat = np.asarray(yhat, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if yhat.shape != labels.shape or yhat.ndim != 1:
        raise ValueError("yhat and labels must be vectors of equal length")
    if not np.isin(labels, (-1.0, 1.0)).all():
        raise ValueError("labels must be +-1")
    n = len(labels)
    ybar = labels / math.sqrt(n)
    overlap = float(yhat @ ybar)
    raw = overlap ** 2

    predicted = np.where(yhat >= 0.0, 1.0, -1.0)  # ties (exact zeros) go to +1
    n_ties = int(np.count_nonzero(yhat == 0.0))
    matches = int(np.count_nonzero(predicted == labels))
    if matches >= n - matches:
        accuracy = matches / n
    else:
        accuracy = (n - matches) / n
        predicted = -predicted

    sign = 1.0 if overlap >= 0 else -1.0
    zeta_hat = raw if zeta is None else float(zeta)
    spread = max(1.0 - zeta_hat, 1e-12)
    residuals = math.sqrt(n / spread) * (sign * yhat - math.sqrt(max(zeta_hat, 0.0)) * ybar)
    return ClusterResult(predicted_labels=predicted, accuracy=float(accuracy),
                         raw_alignment=raw, residuals=residuals, n_ties=n_ties)

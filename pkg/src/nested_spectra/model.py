"""Model parameters, regime conversions, and reproducible samplers.

Two observation models share one sampling core:

    general:    T = beta_T * (M outer z) + W / sqrt(n_T)
                M = beta_M * x y' + Z / sqrt(n_M)
    multi-view: X = (mu ybar' + Z) outer h + W,
                Z_ij ~ N(0, 1/(p+n)),  W_ijk ~ N(0, 1/(p+n+m))

with x, y, z unit vectors, n_M = n1 + n2, n_T = n1 + n2 + n3, and
ybar = labels / sqrt(n) for balanced +-1 labels. The multi-view model is the
general one with (beta_M, beta_T) = (|mu|, |h|), x = mu/|mu|, y = ybar,
z = h/|h|, so every spectral prediction for the general model transfers.

Randomness: the named generator is PCG64 via numpy.random.default_rng; normal
variates use numpy's Ziggurat sampler. Draw order is fixed per sampler
(signals first, then noise, in the order stated in each docstring) so a given
(params, seed) pair is bit-reproducible. Monte Carlo drivers derive per-trial
streams with derive_seed(master_seed, trial_index), which keys a SeedSequence
and therefore cannot collide or depend on scheduling order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor_core import outer_mv

__all__ = [
    "ShapeRatios",
    "GeneralParams",
    "PlantedSignals",
    "MultiViewParams",
    "derive_seed",
    "sample_general",
    "sample_multiview",
    "rho_from_beta",
    "beta_from_rho",
    "varrho",
    "beta_from_varrho",
]

_MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class ShapeRatios:
    """Dimension ratios c_l = n_l / n_T, positive and summing to 1."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if abs(self.c1 + self.c2 + self.c3 - 1.0) > 1e-12:
            raise ValueError("shape ratios must sum to 1")

    @classmethod
    def from_dims(cls, n1: int, n2: int, n3: int) -> "ShapeRatios":
        n_t = n1 + n2 + n3
        return cls(n1 / n_t, n2 / n_t, n3 / n_t)

    # The mode-2 theory only ever sees c1 and c2 through these rescalings
    # (note c1_bar + c2_bar == 1).
    @property
    def c1_bar(self) -> float:
        return self.c1 / (1.0 - self.c3)

    @property
    def c2_bar(self) -> float:
        return self.c2 / (1.0 - self.c3)


def _check_seed(seed):
    if not (isinstance(seed, (int, np.integer)) and 0 <= seed < _MAX_SEED):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


@dataclass(frozen=True)
class GeneralParams:
    """Parameters of the general model. Give exactly one of beta_T or rho_T;
    the other is resolved through the exact finite-size relation
    rho_T = beta_T**2 * n_T / sqrt(n1*n2*n3)."""

    n1: int
    n2: int
    n3: int
    beta_M: float
    beta_T: float | None = None
    rho_T: float | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("n1", "n2", "n3"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and v > 0):
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if self.beta_M < 0:
            raise ValueError(f"beta_M must be nonnegative, got {self.beta_M}")
        _check_seed(self.seed)
        if (self.beta_T is None) == (self.rho_T is None):
            raise ValueError("give exactly one of beta_T or rho_T")
        scale = self.n_T / math.sqrt(self.n1 * self.n2 * self.n3)
        if self.rho_T is None:
            if self.beta_T < 0:
                raise ValueError(f"beta_T must be nonnegative, got {self.beta_T}")
            object.__setattr__(self, "rho_T", self.beta_T ** 2 * scale)
        else:
            if self.rho_T < 0:
                raise ValueError(f"rho_T must be nonnegative, got {self.rho_T}")
            object.__setattr__(self, "beta_T", math.sqrt(self.rho_T / scale))

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.n1, self.n2, self.n3)

    @property
    def n_M(self) -> int:
        return self.n1 + self.n2

    @property
    def n_T(self) -> int:
        return self.n1 + self.n2 + self.n3

    @property
    def c(self) -> ShapeRatios:
        return ShapeRatios.from_dims(self.n1, self.n2, self.n3)

    @property
    def varsigma2(self) -> float:
        """Noise level of the weighted-mean matrix: beta_T**2 + n_M/n_T."""
        return self.beta_T ** 2 + self.n_M / self.n_T


@dataclass(frozen=True, eq=False)
class PlantedSignals:
    """The planted unit-norm signal vectors."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if v.ndim != 1 or not np.isfinite(v).all():
                raise ValueError(f"{name} must be a finite vector")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm")


@dataclass(frozen=True, eq=False)
class MultiViewParams:
    """Parameters of the multi-view clustering model.

    Labels default to a balanced split (first n/2 entries +1, rest -1; the
    model is exchangeable in the sample index, so the fixed assignment loses
    nothing). Pass n_pos for an imbalanced split; the asymptotic predictions
    assume balance.
    """

    p: int
    n: int
    m: int
    mu: np.ndarray
    h: np.ndarray
    seed: int = 0
    n_pos: int | None = None

    def __post_init__(self):
        for name in ("p", "n", "m"):
            v = getattr(self, name)
            if not (isinstance(v, (int, np.integer)) and v > 0):
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=np.float64))
        object.__setattr__(self, "h", np.asarray(self.h, dtype=np.float64))
        if self.mu.shape != (self.p,):
            raise ValueError(f"mu must have length p={self.p}")
        if self.h.shape != (self.m,):
            raise ValueError(f"h must have length m={self.m}")
        if not (np.isfinite(self.mu).all() and np.isfinite(self.h).all()):
            raise ValueError("mu and h must be finite")
        _check_seed(self.seed)
        if self.n_pos is None:
            if self.n % 2:
                raise ValueError("n must be even for the balanced default; "
                                 "pass n_pos for an imbalanced split")
        elif not 0 < self.n_pos < self.n:
            raise ValueError(f"n_pos must lie in (0, n), got {self.n_pos}")

    @classmethod
    def from_norms(cls, p: int, n: int, m: int, mu_norm: float, h_norm: float,
                   seed: int = 0) -> "MultiViewParams":
        """Canonical deterministic directions at the requested norms (the noise
        is rotation invariant in distribution, so directions are moot):
        mu = mu_norm * e1, h = h_norm * ones/sqrt(m)."""
        if mu_norm < 0 or h_norm < 0:
            raise ValueError("norms must be nonnegative")
        mu = np.zeros(p)
        mu[0] = mu_norm
        h = np.full(m, h_norm / math.sqrt(m))
        return cls(p=p, n=n, m=m, mu=mu, h=h, seed=seed)

    @property
    def n_tot(self) -> int:
        return self.p + self.n + self.m

    @property
    def c(self) -> ShapeRatios:
        return ShapeRatios.from_dims(self.p, self.n, self.m)

    @property
    def mu_norm(self) -> float:
        return float(np.linalg.norm(self.mu))

    @property
    def h_norm(self) -> float:
        return float(np.linalg.norm(self.h))

    @property
    def rho(self) -> float:
        """Effective tensor signal-to-noise |h|^2 (p+n+m)/sqrt(pnm)."""
        return self.h_norm ** 2 * self.n_tot / math.sqrt(self.p * self.n * self.m)

    def labels(self) -> np.ndarray:
        n_pos = self.n // 2 if self.n_pos is None else self.n_pos
        out = np.ones(self.n)
        out[n_pos:] = -1.0
        return out

    def general_equivalent(self, seed: int | None = None) -> GeneralParams:
        """The GeneralParams this model instantiates: dims (p, n, m) and
        (beta_M, beta_T) = (|mu|, |h|)."""
        return GeneralParams(n1=self.p, n2=self.n, n3=self.m,
                             beta_M=self.mu_norm, beta_T=self.h_norm,
                             seed=self.seed if seed is None else seed)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Portable per-trial seed: SeedSequence keyed on (master, *indices)."""
    _check_seed(master_seed)
    ss = np.random.SeedSequence([int(master_seed), *(int(i) for i in indices)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def sample_general(params: GeneralParams, *, signals: PlantedSignals | None = None,
                   noise: bool = True):
    """Draw (T, M, signals) from the general model.

    Draw order: x, y, z (uniform on their spheres, skipped when `signals` is
    injected), then Z, then W. With noise=False both noise blocks are zero, so
    T = beta_T*beta_M*(x outer y outer z) exactly.
    """
    n1, n2, n3 = params.dims
    rng = np.random.default_rng(params.seed)
    if signals is None:
        signals = PlantedSignals(x=_unit(rng.standard_normal(n1)),
                                 y=_unit(rng.standard_normal(n2)),
                                 z=_unit(rng.standard_normal(n3)))
    m = params.beta_M * np.outer(signals.x, signals.y)
    if noise:
        m = m + rng.standard_normal((n1, n2)) / math.sqrt(params.n_M)
    if noise:
        t = rng.standard_normal((n1, n2, n3))
        t *= 1.0 / math.sqrt(params.n_T)
        t += outer_mv(m, params.beta_T * signals.z)
    else:
        t = outer_mv(m, params.beta_T * signals.z)
    return t, m, signals


def sample_multiview(params: MultiViewParams, *, noise: bool = True):
    """Draw (X, labels) from the multi-view model.

    Labels are deterministic given params (see MultiViewParams); draw order is
    Z then W. With noise=False, X = (mu ybar') outer h exactly.
    """
    p, n, m = params.p, params.n, params.m
    labels = params.labels()
    ybar = labels / math.sqrt(n)
    rng = np.random.default_rng(params.seed)
    mean = np.outer(params.mu, ybar)
    if noise:
        mean = mean + rng.standard_normal((p, n)) / math.sqrt(p + n)
    x = outer_mv(mean, params.h)
    if noise:
        x += rng.standard_normal((p, n, m)) / math.sqrt(params.n_tot)
    return x, labels


def rho_from_beta(params: GeneralParams) -> float:
    """rho_T = beta_T**2 * n_T / sqrt(n1*n2*n3), exactly at the given dims."""
    return params.beta_T ** 2 * params.n_T / math.sqrt(params.n1 * params.n2 * params.n3)


def beta_from_rho(params: GeneralParams) -> float:
    """Inverse of rho_from_beta at the given dims."""
    return math.sqrt(params.rho_T * math.sqrt(params.n1 * params.n2 * params.n3)
                     / params.n_T)


def varrho(params: GeneralParams) -> float:
    """Mode-3 effective signal-to-noise
    beta_T**2 * (n_T/sqrt(n1*n2*n3)) * (n1*n2/n_M + beta_M**2).

    The beta_M**2 term is deliberately retained: it is negligible in the limit
    but improves predictions at finite dims.
    """
    n1, n2, n3 = params.dims
    return (params.beta_T ** 2 * params.n_T / math.sqrt(n1 * n2 * n3)
            * (n1 * n2 / params.n_M + params.beta_M ** 2))


def beta_from_varrho(n1: int, n2: int, n3: int, beta_M: float,
                     varrho_target: float) -> float:
    """Solve varrho(params) == varrho_target for beta_T at the given dims."""
    if varrho_target < 0:
        raise ValueError(f"varrho_target must be nonnegative, got {varrho_target}")
    n_m, n_t = n1 + n2, n1 + n2 + n3
    denom = n_t / math.sqrt(n1 * n2 * n3) * (n1 * n2 / n_m + beta_M ** 2)
    return math.sqrt(varrho_target / denom)

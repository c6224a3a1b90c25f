"""Gram matrices, centering transforms, symmetric eigendecomposition, and
empirical spectral summaries.

The centered-and-scaled Gram matrices whose spectra the asymptotic laws
describe are

    mode 2: (n_T/sqrt(n1*n2*n3)) * U2 U2' - ((n2 + n1*n3)/sqrt(n1*n2*n3)) * I
    mode 3: (n_T/sqrt(n1*n2*n3)) * U3 U3' - ((n3 + n1*n2)/sqrt(n1*n2*n3)) * I

with U_m the mode-m unfolding. Eigendecomposition is delegated to LAPACK
(numpy.linalg.eigh), which is deterministic for a fixed input; the Gram
products go through BLAS matmul, which is the blocked, cache-friendly
implementation the hot loop needs (about 2e10 flops per trial at the largest
desk dims).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import GeneralParams

__all__ = [
    "SpectrumResult",
    "EsdSummary",
    "gram",
    "center_scale_mode2",
    "center_scale_mode3",
    "sym_eigen",
    "esd",
]


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Eigenvalues (ascending) and matching eigenvector columns of a symmetric
    matrix, with a tag recording which affine transform produced it."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    centering: str = "none"  # none | mode2 | mode3 | oracle

    @property
    def top_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def top_eigenvector(self) -> np.ndarray:
        return self.eigenvectors[:, -1]


def gram(u: np.ndarray) -> np.ndarray:
    """U U', symmetric positive semidefinite, rows x rows."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2:
        raise ValueError(f"gram expects a matrix, got ndim={u.ndim}")
    return u @ u.T


def _center_scale(g, params, short_dim, shift_count):
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (short_dim, short_dim):
        raise ValueError(f"expected a {short_dim}x{short_dim} Gram matrix, "
                         f"got shape {g.shape}")
    root = math.sqrt(params.n1 * params.n2 * params.n3)
    out = (params.n_T / root) * g
    idx = np.arange(short_dim)
    out[idx, idx] -= shift_count / root
    return out


def center_scale_mode2(g: np.ndarray, params: GeneralParams) -> np.ndarray:
    """(n_T/sqrt(n1*n2*n3)) g - ((n2 + n1*n3)/sqrt(n1*n2*n3)) I for the
    mode-2 Gram g = U2 U2'."""
    return _center_scale(g, params, params.n2, params.n2 + params.n1 * params.n3)


def center_scale_mode3(g: np.ndarray, params: GeneralParams) -> np.ndarray:
    """Same transform for the mode-3 Gram, with shift n3 + n1*n2."""
    return _center_scale(g, params, params.n3, params.n3 + params.n1 * params.n2)


def sym_eigen(s: np.ndarray, centering: str = "none") -> SpectrumResult:
    """Full eigendecomposition of a symmetric matrix.

    The input is symmetrized as (S + S')/2 before the solve; that tolerates
    the 1e-13-scale asymmetry of floating-point Gram products but a grossly
    asymmetric input is rejected. Eigenvalues come back ascending; each
    eigenvector's sign is fixed so its first entry of largest absolute value
    is positive, making downstream outputs deterministic.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    if not np.isfinite(s).all():
        raise ValueError("matrix entries must be finite")
    scale = np.linalg.norm(s)
    if scale > 0 and np.linalg.norm(s - s.T) > 1e-8 * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    sym = (s + s.T) / 2.0
    try:
        eigenvalues, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"symmetric eigensolver failed on a {s.shape[0]}x{s.shape[1]} "
            f"matrix: {exc}") from exc
    # sign convention: first component of largest absolute value made positive
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors = vectors * signs
    return SpectrumResult(eigenvalues=eigenvalues, eigenvectors=vectors,
                          centering=centering)


@dataclass(frozen=True, eq=False)
class EsdSummary:
    """Histogram plus exact empirical CDF of an eigenvalue sample."""

    bin_edges: np.ndarray
    masses: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)  # sorted ascending

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def second_largest(self) -> float:
        if len(self.eigenvalues) < 2:
            raise ValueError("need at least two eigenvalues")
        return float(self.eigenvalues[-2])

    def cdf(self, x):
        """Exact empirical step function P(lambda <= x), right-continuous."""
        pos = np.searchsorted(self.eigenvalues, x, side="right")
        return pos / len(self.eigenvalues)


def esd(sr: SpectrumResult, bins: int) -> EsdSummary:
    """Normalized histogram over [min, max] plus the exact empirical CDF."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    vals = np.sort(np.asarray(sr.eigenvalues, dtype=np.float64))
    lo, hi = float(vals[0]), float(vals[-1])
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(vals, bins=bins, range=(lo, hi))
    return EsdSummary(bin_edges=edges, masses=counts / len(vals), eigenvalues=vals)

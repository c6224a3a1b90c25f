"""Dense order-3 tensor operations: unfoldings, outer and Kronecker products.

A tensor is a float64 ndarray of shape (n1, n2, n3) in C order, so the flat
memory index of entry (i, j, k) is (i*n2 + j)*n3 + k with 0-based indices.
Docstring formulas use 1-based indices, matching the usual written
conventions; code is 0-based throughout.

Unfolding column conventions (1-based):

    mode 1: n1 x (n2*n3), entry (i,j,k) lands in column n3*(j-1) + k
    mode 2: n2 x (n1*n3), entry (i,j,k) lands in column n3*(i-1) + k
    mode 3: n3 x (n1*n2), entry (i,j,k) lands in column n2*(i-1) + j

Only the mode-1 rule is forced by the model definition; modes 2 and 3 mirror
it with the row index swapped out. The identity tests pin all three down
against the rank-one and matrix-times-vector factorizations, e.g.
unfold(outer_vvv(u, v, w), 2) == v (u kron w)'.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_tensor3",
    "unfold",
    "refold",
    "outer_mv",
    "outer_vvv",
    "kronecker",
    "inner",
    "frobenius",
]


def as_tensor3(a) -> np.ndarray:
    """Validate `a` as an order-3 tensor of finite reals; returns a C-contiguous
    float64 array (a copy only when conversion requires one)."""
    t = np.ascontiguousarray(a, dtype=np.float64)
    if t.ndim != 3:
        raise ValueError(f"expected an order-3 tensor, got ndim={t.ndim}")
    if not np.isfinite(t).all():
        raise ValueError("tensor entries must be finite")
    return t


def unfold(t: np.ndarray, mode: int) -> np.ndarray:
    """Matricize `t` along `mode` per the module's column conventions."""
    if t.ndim != 3:
        raise ValueError(f"expected an order-3 tensor, got ndim={t.ndim}")
    n1, n2, n3 = t.shape
    if mode == 1:
        return t.reshape(n1, n2 * n3)
    if mode == 2:
        return t.transpose(1, 0, 2).reshape(n2, n1 * n3)
    if mode == 3:
        return t.transpose(2, 0, 1).reshape(n3, n1 * n2)
    raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")


def refold(u: np.ndarray, mode: int, dims: tuple[int, int, int]) -> np.ndarray:
    """Inverse of unfold: rebuild the (n1, n2, n3) tensor from its mode-`mode`
    matricization."""
    n1, n2, n3 = dims
    expected = {1: (n1, n2 * n3), 2: (n2, n1 * n3), 3: (n3, n1 * n2)}
    if mode not in expected:
        raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")
    if u.shape != expected[mode]:
        raise ValueError(f"mode-{mode} unfolding of dims {dims} must have shape "
                         f"{expected[mode]}, got {u.shape}")
    if mode == 1:
        t = u.reshape(n1, n2, n3)
    elif mode == 2:
        t = u.reshape(n2, n1, n3).transpose(1, 0, 2)
    else:
        t = u.reshape(n3, n1, n2).transpose(1, 2, 0)
    return np.ascontiguousarray(t)


def outer_mv(a: np.ndarray, w: np.ndarray) -> np.ndarray:
    """[A outer w]_{i,j,k} = A_{i,j} w_k for a matrix A and vector w."""
    a = np.asarray(a, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if a.ndim != 2 or w.ndim != 1:
        raise ValueError("outer_mv expects a matrix and a vector")
    return a[:, :, None] * w[None, None, :]


def outer_vvv(u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Rank-one tensor [u outer v outer w]_{i,j,k} = u_i v_j w_k."""
    u, v, w = (np.asarray(e, dtype=np.float64) for e in (u, v, w))
    if u.ndim != 1 or v.ndim != 1 or w.ndim != 1:
        raise ValueError("outer_vvv expects three vectors")
    return u[:, None, None] * v[None, :, None] * w[None, None, :]


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with [A kron B]_{p1(i-1)+r, p2(j-1)+s} = A_{i,j} B_{r,s}.

    1-D inputs are treated as single-column matrices.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kronecker expects matrices or vectors")
    return np.kron(a, b)


def inner(t1: np.ndarray, t2: np.ndarray) -> float:
    """Entrywise inner product sum_{i,j,k} T_{i,j,k} T'_{i,j,k}."""
    if t1.shape != t2.shape:
        raise ValueError(f"dimension mismatch: {t1.shape} vs {t2.shape}")
    return float(np.vdot(t1, t2))


def frobenius(t: np.ndarray) -> float:
    """Frobenius norm sqrt(<T, T>)."""
    return float(np.linalg.norm(t))

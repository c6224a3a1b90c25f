"""Closed-form asymptotic predictions: limiting spectral laws, spike locations
and alignments, the detectability phase transition, and the clustering
accuracy law.

Shape ratios enter through c1b = c1/(1-c3) and c2b = c2/(1-c3) (note
c1b + c2b = 1). The centered-scaled mode-2 Gram spectrum converges to the law
whose Stieltjes transform m(s) solves the cubic

    (rho*c2b) m^3 + (1 + s*rho*c2b) m^2 + (s + rho*(c2b - c1b)) m + 1 = 0

with the root selected by Im[m]*Im[s] > 0 off the real axis; rho = 0
degenerates this to the semicircle equation m^2 + s m + 1 = 0. Densities are
recovered by Stieltjes inversion, density(t) = Im[m(t + i*eta)]/pi at small
eta; bulk edges are located numerically (the cubic gives no closed form).

The mode-3 law is the plain semicircle on [-2, 2]; the weighted-mean matrix
gives a rescaled Marchenko-Pastur law with edges (sqrt(c1b) +- sqrt(c2b))^2
and an atom max(0, 1 - c1/c2) at zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import cumulative_trapezoid, simpson
from scipy.optimize import brentq

from .model import MultiViewParams, ShapeRatios

__all__ = [
    "Law",
    "SpikePrediction",
    "stieltjes_mode2",
    "bulk_edges_mode2",
    "lsd_density_mode2",
    "semicircle",
    "semicircle_law",
    "mp_density",
    "mp_atom_mass",
    "mp_edges",
    "mp_law",
    "spike2",
    "phase_transition_rho",
    "spike_oracle",
    "spike3",
    "accuracy_from_alignment",
    "multiview_zeta",
]

QUAD_POINTS = 4001   # Simpson grid size declared for the 1e-3 mass tolerance
QUAD_PAD = 0.5       # quadrature interval is [e- - pad, e+ + pad]
DEFAULT_ETA = 1e-6
EDGE_FLOOR = 1e-4    # density level defining the numerically located edges


# ---------------------------------------------------------------------------
# cubic Stieltjes transform

def _cubic_coeffs(s, rho, c):
    a = rho * c.c2_bar
    g = rho * (c.c2_bar - c.c1_bar)
    return a, 1.0 + a * s, s + g, np.ones_like(s)


def _cubic_roots(a3, a2, a1, a0):
    """All three roots of a3 z^3 + a2 z^2 + a1 z + a0 = 0, vectorized Cardano.

    a0 must be nonzero (here it is identically 1): the cubic is solved in the
    reciprocal variable w = 1/z, whose polynomial a0 w^3 + a1 w^2 + a2 w + a3
    has a non-degenerating leading coefficient. Solving the original
    orientation directly turns catastrophically ill-conditioned as a3 -> 0
    (the depressed-cubic shift a2/(3 a3) blows up); in reciprocal form the
    shift stays of order |a1/a0| for every rho down to 0. Returns shape
    (3,) + broadcast shape. The larger-magnitude branch of u^3 is taken to
    dodge cancellation when the depressed cubic is nearly a pure cube.
    """
    b = np.asarray(a1 / a0, dtype=complex)
    cc = np.asarray(a2 / a0, dtype=complex)
    d = np.asarray(a3 / a0, dtype=complex) * np.ones_like(b)
    p = cc - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
    disc = np.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u3a = -q / 2.0 + disc
    u3b = -q / 2.0 - disc
    u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
    u = u3 ** (1.0 / 3.0)
    omega = np.exp(2j * np.pi / 3.0)
    roots = []
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(3):
            uk = u * omega ** k
            t = np.where(np.abs(uk) > 0.0, uk - p / (3.0 * uk), 0.0)
            w = t - b / 3.0
            roots.append(np.where(np.abs(w) > 0.0, 1.0 / w, np.inf))
    return np.stack(roots)


def _polish(m, a3, a2, a1, a0, steps=8):
    """Newton steps on the original (non-depressed) cubic; vectorized, with
    early exit once the corrections stop moving."""
    m = np.asarray(m, dtype=complex)
    for _ in range(steps):
        f = ((a3 * m + a2) * m + a1) * m + a0
        fp = (3.0 * a3 * m + 2.0 * a2) * m + a1
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = np.where(np.abs(fp) > 0.0, f / np.where(fp == 0, 1.0, fp), 0.0)
        delta = np.where(np.isfinite(delta) & np.isfinite(m), delta, 0.0)
        m = m - delta
        if np.all(np.abs(delta) <= 1e-15 * (1.0 + np.abs(m))):
            break
    return m


def _roots_at(s, rho, c):
    a3, a2, a1, a0 = _cubic_coeffs(s, rho, c)
    return _polish(_cubic_roots(a3, a2, a1, a0), a3, a2, a1, a0)


def _continue_to(s_pt, rho, c, steps=60):
    """Track the Stieltjes branch from the far field down to s_pt by nearest-
    root continuation along the vertical line through Re(s_pt).

    Starts at the -1/s asymptote, where the branch is unambiguous; m is
    analytic off the real axis, so nearest-root tracking cannot jump branches
    once steps are geometric in Im(s)."""
    sgn = 1.0 if s_pt.imag >= 0 else -1.0
    target = max(abs(s_pt.imag), 1e-12)
    hi = max(10.0 * (1.0 + abs(s_pt)), 50.0)
    start = s_pt.real + 1j * sgn * hi
    prev = -1.0 / start
    for im in np.geomspace(hi, target, steps):
        sk = np.complex128(s_pt.real + 1j * sgn * im)
        roots = _roots_at(sk, rho, c)
        prev = roots[np.argmin(np.abs(roots - prev))]
    return complex(prev)


def _semicircle_transform(s):
    """Stieltjes transform of the semicircle law, the rho = 0 degeneration
    m^2 + s m + 1 = 0."""
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape, dtype=complex)
    off = s.imag != 0
    if off.any():
        so = s[off]
        r = np.sqrt(so * so - 4.0)
        m1 = (-so + r) / 2.0
        m2 = (-so - r) / 2.0
        pick1 = m1.imag * np.sign(so.imag) > 0
        out[off] = np.where(pick1, m1, m2)
    if (~off).any():
        sr = s[~off].real
        if (np.abs(sr) < 2.0).any():
            bad = sr[np.abs(sr) < 2.0][0]
            raise ValueError(f"s={bad} lies inside the bulk [-2, 2]")
        r = np.sqrt(sr * sr - 4.0)
        out[~off] = (-sr + np.sign(sr) * r) / 2.0  # the branch with |m| <= 1
    return out


def _real_axis_value(t, rho, c):
    """Stieltjes transform at real t outside the bulk: the limit from above,
    then polished back onto the real root of the real cubic."""
    m = _continue_to(complex(t, 1e-9), rho, c)
    if abs(m.imag) > 1e-5 * (1.0 + abs(m)):
        raise ValueError(f"s={t} lies inside the bulk; the transform is not "
                         "real there")
    a3, a2, a1, a0 = _cubic_coeffs(np.complex128(t), rho, c)
    m = _polish(np.complex128(m.real), a3, a2, a1, a0, steps=3)
    return complex(m).real


def stieltjes_mode2(s, rho_T: float, c: ShapeRatios):
    """Stieltjes transform of the mode-2 limiting law at s (scalar or array).

    Off the real axis the cubic root with Im[m]*Im[s] > 0 is returned; for
    real s outside the bulk, the real root continuous with the far-field
    -1/s branch. Real s inside the bulk raises ValueError; an unresolvable
    root selection raises ArithmeticError.
    """
    if rho_T < 0:
        raise ValueError(f"rho_T must be nonnegative, got {rho_T}")
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    if rho_T == 0:
        out = _semicircle_transform(s_arr)
        if scalar:
            v = complex(out[0])
            return v.real if s_arr[0].imag == 0 else v
        return out.reshape(np.shape(s))

    out = np.empty(s_arr.shape, dtype=complex)
    off = s_arr.imag != 0
    if off.any():
        so = s_arr[off]
        roots = _roots_at(so, rho_T, c)
        score = roots.imag * np.sign(so.imag)
        ok = score > 0
        picked = np.take_along_axis(
            roots, np.argmax(np.where(ok, score, -np.inf), axis=0)[None], axis=0)[0]
        n_ok = ok.sum(axis=0)
        for idx in np.flatnonzero(n_ok != 1):
            m = _continue_to(complex(so[idx]), rho_T, c)
            if m.imag * np.sign(so[idx].imag) <= 0:
                raise ArithmeticError(
                    f"no cubic root satisfies the selection rule at s={so[idx]}")
            picked[idx] = m
        out[off] = picked
    for idx in np.flatnonzero(~off):
        out[idx] = _real_axis_value(s_arr[idx].real, rho_T, c)
    if scalar:
        v = complex(out[0])
        return v.real if s_arr[0].imag == 0 else v
    return out.reshape(np.shape(s))


def _density_mode2(t, rho_T, c, eta):
    m = stieltjes_mode2(np.asarray(t, dtype=float) + 1j * eta, rho_T, c)
    return np.maximum(np.atleast_1d(m).imag / np.pi, 0.0)


def _edge_window(rho_T, c):
    """Outer bound on the bulk, from the real roots of the cubic's
    discriminant in s (edges are branch points, so they are among them)."""
    a = rho_T * c.c2_bar
    g = rho_T * (c.c2_bar - c.c1_bar)
    bpoly = np.array([1.0, a])       # B(s) = 1 + a s, ascending coefficients
    cpoly = np.array([g, 1.0])       # C(s) = s + g
    b2 = npoly.polymul(bpoly, bpoly)
    c2 = npoly.polymul(cpoly, cpoly)
    disc = npoly.polyadd(18.0 * a * npoly.polymul(bpoly, cpoly),
                         -4.0 * npoly.polymul(b2, bpoly))
    disc = npoly.polyadd(disc, npoly.polymul(b2, c2))
    disc = npoly.polyadd(disc, -4.0 * a * npoly.polymul(c2, cpoly))
    disc = npoly.polyadd(disc, np.array([-27.0 * a * a]))
    roots = npoly.polyroots(disc)
    real = roots[np.abs(roots.imag) < 1e-8].real
    if len(real) == 0:
        return 10.0 * (1.0 + rho_T)
    return 1.1 * float(np.max(np.abs(real))) + 1.0


def bulk_edges_mode2(rho_T: float, c: ShapeRatios, eta: float = DEFAULT_ETA,
                     floor: float = EDGE_FLOOR) -> tuple[float, float]:
    """Numerically locate [e-, e+]: bisection of density(t; eta) against the
    floor threshold, bracketed by a coarse scan of the discriminant window."""
    if rho_T == 0:
        return (-2.0, 2.0)
    window = _edge_window(rho_T, c)
    xs = np.linspace(-window, window, 4001)
    dens = _density_mode2(xs, rho_T, c, eta)
    above = np.flatnonzero(dens > floor)
    if len(above) == 0:
        raise ArithmeticError("no bulk found: density never exceeds the floor")
    i0, i1 = above[0], above[-1]

    def height(t):
        return float(_density_mode2(t, rho_T, c, eta)[0]) - floor

    left = brentq(height, xs[i0 - 1], xs[i0], xtol=1e-12) if i0 > 0 else xs[0]
    right = brentq(height, xs[i1], xs[i1 + 1], xtol=1e-12) if i1 + 1 < len(xs) else xs[-1]
    return (float(left), float(right))


# ---------------------------------------------------------------------------
# laws

@dataclass(frozen=True, eq=False)
class Law:
    """A limiting spectral law: density samples, support edges, optional atom
    at zero, and a CDF built with the module's declared quadrature (composite
    Simpson mass on QUAD_POINTS points over [e- - QUAD_PAD, e+ + QUAD_PAD])."""

    grid: np.ndarray
    density: np.ndarray
    edge_left: float
    edge_right: float
    atom_mass: float
    total_mass: float
    quad_grid: np.ndarray = field(repr=False)
    quad_density: np.ndarray = field(repr=False)
    cdf_values: np.ndarray = field(repr=False)  # continuous part only

    def pdf(self, x):
        return np.interp(x, self.quad_grid, self.quad_density, left=0.0, right=0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        cont = np.interp(x, self.quad_grid, self.cdf_values,
                         left=0.0, right=self.cdf_values[-1])
        return cont + self.atom_mass * (x >= 0.0)


def _make_law(density_fn, edge_left, edge_right, atom_mass=0.0, grid=None):
    qx = np.linspace(edge_left - QUAD_PAD, edge_right + QUAD_PAD, QUAD_POINTS)
    qd = np.maximum(np.asarray(density_fn(qx), dtype=float), 0.0)
    mass = float(simpson(qd, x=qx)) + atom_mass
    cdf_vals = cumulative_trapezoid(qd, qx, initial=0.0)
    if grid is None:
        g, d = qx, qd
    else:
        g = np.asarray(grid, dtype=float)
        d = np.maximum(np.asarray(density_fn(g), dtype=float), 0.0)
    return Law(grid=g, density=d, edge_left=float(edge_left),
               edge_right=float(edge_right), atom_mass=float(atom_mass),
               total_mass=mass, quad_grid=qx, quad_density=qd,
               cdf_values=cdf_vals)


def lsd_density_mode2(grid, rho_T: float, c: ShapeRatios,
                      eta: float = DEFAULT_ETA) -> Law:
    """The mode-2 limiting law, density sampled on `grid` by Stieltjes
    inversion at the given eta."""
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    edges = bulk_edges_mode2(rho_T, c, eta=eta)
    return _make_law(lambda t: _density_mode2(t, rho_T, c, eta),
                     edges[0], edges[1], grid=grid)


def semicircle(x):
    """Semicircle density sqrt(max(4 - x^2, 0)) / (2 pi)."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.maximum(4.0 - x * x, 0.0)) / (2.0 * np.pi)


def semicircle_law(grid=None) -> Law:
    return _make_law(semicircle, -2.0, 2.0, grid=grid)


def mp_edges(c: ShapeRatios) -> tuple[float, float]:
    """Support edges (sqrt(c1b) -+ sqrt(c2b))^2 of the weighted-mean law."""
    lo = (math.sqrt(c.c1_bar) - math.sqrt(c.c2_bar)) ** 2
    hi = (math.sqrt(c.c1_bar) + math.sqrt(c.c2_bar)) ** 2
    return (lo, hi)


def mp_atom_mass(c: ShapeRatios) -> float:
    """Point mass max(0, 1 - c1/c2) at zero (the rank deficiency when the
    weighted-mean matrix is wider than tall, c1 < c2)."""
    return max(0.0, 1.0 - c.c1 / c.c2)


def mp_density(x, c: ShapeRatios):
    """Continuous part of the weighted-mean law,
    sqrt((x - E-)+ (E+ - x)+) / (2 pi c2b x)."""
    x = np.asarray(x, dtype=float)
    lo, hi = mp_edges(c)
    inside = (x > lo) & (x < hi) & (x > 0.0)
    out = np.zeros_like(x)
    xs = x[inside]
    out[inside] = np.sqrt((xs - lo) * (hi - xs)) / (2.0 * np.pi * c.c2_bar * xs)
    return out


def mp_law(c: ShapeRatios, grid=None) -> Law:
    lo, hi = mp_edges(c)
    return _make_law(lambda x: mp_density(x, c), lo, hi,
                     atom_mass=mp_atom_mass(c), grid=grid)


# ---------------------------------------------------------------------------
# spikes, phase transition, accuracy

@dataclass(frozen=True)
class SpikePrediction:
    """An isolated-eigenvalue prediction: asymptotic location, squared
    alignment of the matching eigenvector with the planted signal, and
    whether the spike separates from the bulk at all."""

    location: float
    alignment: float
    detectable: bool


def spike2(rho_T: float, beta_M: float, c: ShapeRatios) -> SpikePrediction:
    """Spike location xi and alignment zeta+ = max(zeta, 0) of the mode-2
    estimator; detectable iff zeta > 0."""
    if rho_T <= 0 or beta_M <= 0:
        raise ValueError("rho_T and beta_M must be positive for the spike "
                         f"formulas, got rho_T={rho_T}, beta_M={beta_M}")
    b2 = beta_M ** 2
    c1b, c2b = c.c1_bar, c.c2_bar
    denom = rho_T * (c2b + b2)
    location = rho_T / b2 * (c1b + b2) * (c2b + b2) + 1.0 / denom
    zeta = 1.0 - ((b2 / denom) ** 2 + c2b * (c1b + b2)) / (b2 * (c2b + b2))
    return SpikePrediction(location=float(location),
                           alignment=float(max(zeta, 0.0)),
                           detectable=zeta > 0)


def phase_transition_rho(beta_M: float, c: ShapeRatios) -> float:
    """The critical rho_T* where zeta crosses zero. Defined only above the
    vertical asymptote beta_M = (c1 c2/(1-c3))**0.25."""
    if beta_M <= 0:
        raise ValueError(f"beta_M must be positive, got {beta_M}")
    gap = beta_M ** 4 - c.c1 * c.c2 / (1.0 - c.c3)
    if gap <= 0:
        raise ValueError(
            f"beta_M={beta_M} is at or below the asymptote "
            f"{(c.c1 * c.c2 / (1.0 - c.c3)) ** 0.25:.6g}; no detectable rho_T exists")
    return beta_M ** 2 / ((c.c2_bar + beta_M ** 2) * math.sqrt(gap))


def spike_oracle(beta_T: float, beta_M: float, c: ShapeRatios,
                 varsigma2: float) -> SpikePrediction:
    """Spike of the weighted-mean matrix spectrum, in terms of
    x = beta_T^2 beta_M^2 / varsigma^2: location (x + c1b)(x + c2b)/x,
    detectable iff x^2 > c1b*c2b, alignment 1 - c2b (x + c1b)/(x (x + c2b))."""
    if beta_T <= 0 or beta_M <= 0 or varsigma2 <= 0:
        raise ValueError("spike_oracle needs positive beta_T, beta_M, varsigma2")
    c1b, c2b = c.c1_bar, c.c2_bar
    x = beta_T ** 2 * beta_M ** 2 / varsigma2
    location = (x + c1b) * (x + c2b) / x
    zeta = 1.0 - c2b * (x + c1b) / (x * (x + c2b))
    detectable = x * x > c1b * c2b
    return SpikePrediction(location=float(location),
                           alignment=float(max(zeta, 0.0)) if detectable else 0.0,
                           detectable=detectable)


def spike3(varrho_value: float) -> SpikePrediction:
    """Mode-3 spike: location varrho + 1/varrho, alignment 1 - 1/varrho^2,
    detectable iff varrho > 1."""
    if varrho_value <= 0:
        raise ValueError(f"varrho must be positive, got {varrho_value}")
    return SpikePrediction(location=varrho_value + 1.0 / varrho_value,
                           alignment=max(1.0 - 1.0 / varrho_value ** 2, 0.0),
                           detectable=varrho_value > 1)


def accuracy_from_alignment(zeta: float) -> float:
    """Asymptotic clustering accuracy Phi(sqrt(zeta/(1-zeta))).

    zeta >= 1 returns the limit 1; negative zeta is clamped to 0 (accuracy
    0.5) with a warning.
    """
    if zeta >= 1.0:
        return 1.0
    if zeta < 0.0:
        warnings.warn(f"negative alignment {zeta} clamped to 0; accuracy 0.5",
                      RuntimeWarning, stacklevel=2)
        zeta = 0.0
    t = math.sqrt(zeta / (1.0 - zeta))
    return 0.5 * (1.0 + math.erf(t / math.sqrt(2.0)))


def multiview_zeta(params: MultiViewParams) -> float:
    """Asymptotic alignment zeta of the multi-view label estimator, evaluated
    at the finite dims: the mode-2 zeta under the substitution
    (c1, c2, c3, beta_M, rho_T) -> (c_p, c_n, c_m, |mu|, rho). May be
    negative (undetectable); accuracy_from_alignment clamps."""
    if params.mu_norm <= 0 or params.h_norm <= 0:
        raise ValueError("multiview_zeta needs |mu| > 0 and |h| > 0")
    tot = params.n_tot
    cp, cn, cm = params.p / tot, params.n / tot, params.m / tot
    cpb, cnb = cp / (1.0 - cm), cn / (1.0 - cm)
    rho = params.rho
    b2 = params.mu_norm ** 2
    return 1.0 - ((b2 / (rho * (cnb + b2))) ** 2 + cnb * (cpb + b2)) / (b2 * (cnb + b2))

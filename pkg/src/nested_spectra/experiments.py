"""Monte Carlo experiment drivers: configuration, trial orchestration, and
CSV/plot emission.

Config files are INI-style key=value text with one flat section per
experiment (section name == subcommand), e.g.

    [esd2]
    n1 = 600
    n2 = 400
    n3 = 200
    rho_T = 2.0
    beta_M = 1.5
    trials = 10

Precedence is defaults < preset < config file < CLI flags. Grid-valued keys
accept either a comma list ("0,0.5,1.5") or "start:stop:count" for a linspace.

Every CSV starts with a comment line recording the config hash (over the
scientific fields only, so output location does not perturb it), the master
seed, and the artifact version, then a header row. Raw values are written
with 17 significant digits (round-trip exact); summary statistics (means and
standard deviations) use fixed 6 decimals. Reruns with the same config are
byte-identical: trial records are keyed by derived per-trial seeds and sorted
by trial index, so the worker count (env NESTED_SPECTRA_THREADS) cannot
change any output. Wall-clock timings go to stdout only, never into CSVs.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .estimators import (alignment, cluster_accuracy, oracle_estimate,
                         tensor_rank1_estimate, unfolding_estimate)
from .model import (GeneralParams, MultiViewParams, ShapeRatios, beta_from_varrho,
                    derive_seed, sample_general, sample_multiview)
from .spectra import center_scale_mode2, center_scale_mode3, gram, sym_eigen
from .tensor_core import unfold
from .theory import (accuracy_from_alignment, lsd_density_mode2, mp_law,
                     multiview_zeta, phase_transition_rho, semicircle_law,
                     spike2, spike3, spike_oracle)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "TrialRecord",
    "PRESETS",
    "EXPERIMENTS",
    "load_config",
    "run_esd2",
    "run_esd3",
    "run_alignment_map",
    "run_benchmark",
    "run_phase",
]


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    # general-model experiments
    n1: int | None = None
    n2: int | None = None
    n3: int | None = None
    beta_M: float | None = None
    rho_T: float | None = None
    varrho: float | None = None
    # alignment-map / phase grids
    rho_grid: tuple | None = None
    beta_grid: tuple | None = None
    mc_cells: int = 0
    # benchmark (multi-view)
    p: int | None = None
    n: int | None = None
    m: int | None = None
    mu_grid: tuple | None = None
    h_norms: tuple | None = None
    # common
    trials: int = 10
    master_seed: int = 42
    out_dir: str = "results"
    bins: int = 60
    eta: float = 1e-6
    emit_plots: bool = False

    def config_hash(self) -> str:
        """Hash of the scientific fields (output location and plot switch
        excluded, so they do not perturb CSV bytes)."""
        skip = {"out_dir", "emit_plots"}
        parts = []
        for f in sorted(fields(self), key=lambda f: f.name):
            if f.name in skip:
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(_fmt(x) for x in v)
            elif isinstance(v, float):
                v = _fmt(v)
            parts.append(f"{f.name}={v}")
        digest = hashlib.sha256(";".join(parts).encode()).hexdigest()
        return digest[:16]


@dataclass
class TrialRecord:
    """One Monte Carlo outcome, reproducible from (master_seed, trial, config)."""

    trial: int
    seed: int
    values: dict
    wall_clock: float


# Caption parameter sets behind --preset. fig1-left/right are the two ESD
# panels at dims (600, 400, 200); fig2 and phase map the detectability
# surface/curve at the same shape ratios; fig3 is the multi-view benchmark.
PRESETS = {
    "fig1-left": dict(experiment="esd2", n1=600, n2=400, n3=200,
                      rho_T=2.0, beta_M=1.5, trials=10),
    "fig1-right": dict(experiment="esd3", n1=600, n2=400, n3=200,
                       varrho=4.0, beta_M=3.0, trials=10),
    "fig2": dict(experiment="alignment-map", n1=600, n2=400, n3=200,
                 rho_grid="0:5:51", beta_grid="0:3:61", mc_cells=0),
    "fig3": dict(experiment="benchmark", p=150, n=300, m=60,
                 mu_grid="0:5:11", h_norms="0.5,1.5", trials=10),
    "phase": dict(experiment="phase", n1=600, n2=400, n3=200,
                  beta_grid="0.7:3:24"),
}

_REQUIRED = {
    "esd2": ("n1", "n2", "n3", "beta_M", "rho_T"),
    "esd3": ("n1", "n2", "n3", "beta_M", "varrho"),
    "alignment-map": ("n1", "n2", "n3", "rho_grid", "beta_grid"),
    "benchmark": ("p", "n", "m", "mu_grid", "h_norms"),
    "phase": ("n1", "n2", "n3", "beta_grid"),
}

_INT_KEYS = {"n1", "n2", "n3", "p", "n", "m", "trials", "master_seed", "bins",
             "mc_cells"}
_FLOAT_KEYS = {"beta_M", "rho_T", "varrho", "eta"}
_GRID_KEYS = {"rho_grid", "beta_grid", "mu_grid", "h_norms"}
_BOOL_KEYS = {"emit_plots"}


def _parse_grid(text) -> tuple:
    if isinstance(text, (tuple, list, np.ndarray)):
        return tuple(float(v) for v in text)
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError("grid count must be >= 1")
            return tuple(np.linspace(float(start), float(stop), count))
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}: {exc}") from exc


def _coerce(key, value):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _GRID_KEYS:
            return _parse_grid(value)
        if key in _BOOL_KEYS:
            if isinstance(value, bool):
                return value
            return str(value).strip().lower() in ("1", "true", "yes", "on")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc
    return value


def load_config(experiment: str, config_path: str | None = None,
                preset: str | None = None, **overrides) -> ExperimentConfig:
    """Resolve an ExperimentConfig from preset, file section, and overrides
    (CLI flags); later sources win."""
    if experiment not in _REQUIRED:
        raise ConfigError(f"unknown experiment {experiment!r}")
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} "
                              f"(have: {', '.join(sorted(PRESETS))})")
        pre = dict(PRESETS[preset])
        if pre.pop("experiment") != experiment:
            raise ConfigError(f"preset {preset!r} belongs to a different experiment")
        merged.update(pre)
    if config_path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str  # keys are case-sensitive (beta_M, rho_T)
        read = parser.read(config_path)
        if not read:
            raise ConfigError(f"cannot read config file {config_path!r}")
        if parser.has_section(experiment):
            merged.update(dict(parser.items(experiment)))
        elif preset is None:
            raise ConfigError(f"config file {config_path!r} has no "
                              f"[{experiment}] section")
    merged.update({k: v for k, v in overrides.items() if v is not None})

    valid = {f.name for f in fields(ExperimentConfig)}
    cfg = ExperimentConfig(experiment=experiment)
    for key, value in merged.items():
        if key not in valid or key == "experiment":
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, _coerce(key, value))

    missing = [k for k in _REQUIRED[experiment] if getattr(cfg, k) is None]
    if missing:
        raise ConfigError(f"{experiment} needs: {', '.join(missing)}")
    if cfg.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    if cfg.bins < 1:
        raise ConfigError(f"bins must be >= 1, got {cfg.bins}")
    if cfg.eta <= 0:
        raise ConfigError(f"eta must be positive, got {cfg.eta}")
    if not (0 <= cfg.master_seed < 2 ** 64):
        raise ConfigError(f"master_seed must be a 64-bit unsigned integer")
    for key in _GRID_KEYS:
        grid = getattr(cfg, key)
        if grid is not None and len(grid) == 0:
            raise ConfigError(f"{key} must be nonempty")
    return cfg


# ---------------------------------------------------------------------------
# output helpers

def _fmt(v) -> str:
    return "%.17g" % float(v)


def _fmt6(v) -> str:
    return "%.6f" % float(v)


def _write_csv(cfg, name, header, rows):
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, name)
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={cfg.config_hash()} "
                 f"master_seed={cfg.master_seed} version={__version__}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
    return path


def _worker_count(trials):
    raw = os.environ.get("NESTED_SPECTRA_THREADS", "")
    try:
        limit = int(raw) if raw else 1
    except ValueError:
        limit = 1
    return max(1, min(limit, trials))


def _run_trials(fn, n_trials):
    """Run fn(0..n_trials-1); results come back in trial order regardless of
    the worker count, and every trial derives its own seed, so parallelism
    cannot change any output."""
    workers = _worker_count(n_trials)
    if workers == 1:
        return [fn(i) for i in range(n_trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_trials)))


def _pooled_histogram(eigenvalues, bins):
    pooled = np.concatenate(eigenvalues)
    lo, hi = float(pooled.min()), float(pooled.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(pooled, bins=bins, range=(lo, hi))
    return edges, counts / pooled.size


# ---------------------------------------------------------------------------
# runners

def run_esd2(cfg: ExperimentConfig) -> list[str]:
    """Centered-scaled mode-2 spectrum vs the cubic law, plus the spike and
    alignment report."""
    ratios = ShapeRatios.from_dims(cfg.n1, cfg.n2, cfg.n3)

    def one(i):
        start = time.perf_counter()
        params = GeneralParams(n1=cfg.n1, n2=cfg.n2, n3=cfg.n3, beta_M=cfg.beta_M,
                               rho_T=cfg.rho_T, seed=derive_seed(cfg.master_seed, i))
        t, _, signals = sample_general(params)
        s = center_scale_mode2(gram(unfold(t, 2)), params)
        sr = sym_eigen(s, centering="mode2")
        record = TrialRecord(trial=i, seed=params.seed, values={
            "top_eigenvalue": sr.eigenvalues[-1],
            "second_eigenvalue": sr.eigenvalues[-2],
            "alignment_y_sq": alignment(sr.top_eigenvector, signals.y),
        }, wall_clock=time.perf_counter() - start)
        return record, sr.eigenvalues

    results = _run_trials(one, cfg.trials)
    records = [r for r, _ in results]
    spectra = [e for _, e in results]

    law = lsd_density_mode2(None, cfg.rho_T, ratios, eta=cfg.eta)
    if cfg.rho_T > 0 and cfg.beta_M > 0:
        spike = spike2(cfg.rho_T, cfg.beta_M, ratios)
        xi, zeta, detect = spike.location, spike.alignment, int(spike.detectable)
    else:
        xi, zeta, detect = math.nan, math.nan, 0

    edges, masses = _pooled_histogram(spectra, cfg.bins)
    paths = [
        _write_csv(cfg, "esd2_histogram.csv", ["bin_left", "bin_right", "mass"],
                   [[_fmt(edges[i]), _fmt(edges[i + 1]), _fmt(masses[i])]
                    for i in range(len(masses))]),
        _write_csv(cfg, "esd2_lsd.csv", ["x", "density"],
                   [[_fmt(x), _fmt(d)] for x, d in zip(law.grid, law.density)]),
        _write_csv(cfg, "esd2_spikes.csv",
                   ["trial", "seed", "top_eigenvalue", "second_eigenvalue",
                    "alignment_y_sq", "xi_theory", "zeta_theory", "detectable"],
                   [[str(r.trial), str(r.seed), _fmt(r.values["top_eigenvalue"]),
                     _fmt(r.values["second_eigenvalue"]),
                     _fmt(r.values["alignment_y_sq"]), _fmt(xi), _fmt(zeta),
                     str(detect)] for r in records]),
    ]
    _report("esd2", records, {"mean top": np.mean([r.values["top_eigenvalue"] for r in records]),
                              "xi": xi,
                              "mean align": np.mean([r.values["alignment_y_sq"] for r in records]),
                              "zeta": zeta})
    if cfg.emit_plots:
        paths.append(_plot_esd(cfg, "esd2", xi))
    return paths


def run_esd3(cfg: ExperimentConfig) -> list[str]:
    """Centered-scaled mode-3 spectrum vs the semicircle, plus the spike and
    alignment report. beta_T is solved from the requested varrho."""
    beta_T = beta_from_varrho(cfg.n1, cfg.n2, cfg.n3, cfg.beta_M, cfg.varrho)

    def one(i):
        start = time.perf_counter()
        params = GeneralParams(n1=cfg.n1, n2=cfg.n2, n3=cfg.n3, beta_M=cfg.beta_M,
                               beta_T=beta_T, seed=derive_seed(cfg.master_seed, i))
        t, _, signals = sample_general(params)
        s = center_scale_mode3(gram(unfold(t, 3)), params)
        sr = sym_eigen(s, centering="mode3")
        record = TrialRecord(trial=i, seed=params.seed, values={
            "top_eigenvalue": sr.eigenvalues[-1],
            "second_eigenvalue": sr.eigenvalues[-2],
            "alignment_z_sq": alignment(sr.top_eigenvector, signals.z),
        }, wall_clock=time.perf_counter() - start)
        return record, sr.eigenvalues

    results = _run_trials(one, cfg.trials)
    records = [r for r, _ in results]
    spectra = [e for _, e in results]

    law = semicircle_law()
    spike = spike3(cfg.varrho)

    edges, masses = _pooled_histogram(spectra, cfg.bins)
    paths = [
        _write_csv(cfg, "esd3_histogram.csv", ["bin_left", "bin_right", "mass"],
                   [[_fmt(edges[i]), _fmt(edges[i + 1]), _fmt(masses[i])]
                    for i in range(len(masses))]),
        _write_csv(cfg, "esd3_lsd.csv", ["x", "density"],
                   [[_fmt(x), _fmt(d)] for x, d in zip(law.grid, law.density)]),
        _write_csv(cfg, "esd3_spikes.csv",
                   ["trial", "seed", "top_eigenvalue", "second_eigenvalue",
                    "alignment_z_sq", "spike_theory", "alignment_theory",
                    "detectable"],
                   [[str(r.trial), str(r.seed), _fmt(r.values["top_eigenvalue"]),
                     _fmt(r.values["second_eigenvalue"]),
                     _fmt(r.values["alignment_z_sq"]), _fmt(spike.location),
                     _fmt(spike.alignment), str(int(spike.detectable))]
                    for r in records]),
    ]
    _report("esd3", records, {"mean top": np.mean([r.values["top_eigenvalue"] for r in records]),
                              "theory": spike.location})
    if cfg.emit_plots:
        paths.append(_plot_esd(cfg, "esd3", spike.location if spike.detectable else None))
    return paths


def run_alignment_map(cfg: ExperimentConfig) -> list[str]:
    """Theoretical alignment surface zeta+ over a (rho_T, beta_M) grid, the
    phase-transition curve, and optional sparse Monte Carlo validation."""
    ratios = ShapeRatios.from_dims(cfg.n1, cfg.n2, cfg.n3)
    asymptote = (ratios.c1 * ratios.c2 / (1.0 - ratios.c3)) ** 0.25

    grid_rows = []
    detectable_cells = []
    for beta in cfg.beta_grid:
        for rho in cfg.rho_grid:
            if rho > 0 and beta > 0:
                z = spike2(rho, beta, ratios).alignment
            else:
                z = 0.0  # outside the formulas' domain: no detectable spike
            grid_rows.append([_fmt(rho), _fmt(beta), _fmt(z)])
            if z > 0:
                detectable_cells.append((rho, beta, z))

    curve_rows = []
    for beta in cfg.beta_grid:
        if beta > asymptote:
            curve_rows.append([_fmt(beta), _fmt(phase_transition_rho(beta, ratios))])

    paths = [
        _write_csv(cfg, "alignment_map_grid.csv", ["rho_T", "beta_M", "zeta_plus"],
                   grid_rows),
        _write_csv(cfg, "alignment_map_curve.csv",
                   ["beta_M", "rho_star", "asymptote"],
                   [row + [_fmt(asymptote)] for row in curve_rows]),
    ]

    if cfg.mc_cells > 0 and detectable_cells:
        take = np.unique(np.linspace(0, len(detectable_cells) - 1,
                                     min(cfg.mc_cells, len(detectable_cells)),
                                     dtype=int))
        mc_rows = []
        for j, cell_idx in enumerate(take):
            rho, beta, z = detectable_cells[cell_idx]

            def one(i, rho=rho, beta=beta, j=j):
                params = GeneralParams(n1=cfg.n1, n2=cfg.n2, n3=cfg.n3,
                                       beta_M=beta, rho_T=rho,
                                       seed=derive_seed(cfg.master_seed, j, i))
                t, _, signals = sample_general(params)
                est = unfolding_estimate(t, 2)
                return alignment(est.vector, signals.y)

            vals = _run_trials(one, cfg.trials)
            mc_rows.append([_fmt(rho), _fmt(beta), _fmt(z),
                            _fmt6(np.mean(vals)), _fmt6(np.std(vals)),
                            str(cfg.trials)])
        paths.append(_write_csv(cfg, "alignment_map_mc.csv",
                                ["rho_T", "beta_M", "zeta_plus_theory",
                                 "alignment_mc_mean", "alignment_mc_std", "trials"],
                                mc_rows))
    if cfg.emit_plots:
        paths.append(_plot_alignment_map(cfg))
    return paths


def run_benchmark(cfg: ExperimentConfig) -> list[str]:
    """Multi-view clustering accuracy: theory curves for the unfolding and
    weighted-mean estimators, Monte Carlo for all three methods.

    All three estimators run on the same sampled tensor per trial (common
    random numbers keep the method comparisons tight). No theory curve is
    emitted for the tensor method: its asymptotic accuracy is not among the
    closed forms implemented here.
    """
    summary_rows = []
    trial_rows = []
    for hi, h_norm in enumerate(cfg.h_norms):
        for mi, mu_norm in enumerate(cfg.mu_grid):
            mv = MultiViewParams.from_norms(cfg.p, cfg.n, cfg.m, mu_norm, h_norm)
            if mu_norm > 0 and h_norm > 0:
                acc_u_th = accuracy_from_alignment(multiview_zeta(mv))
                gen = mv.general_equivalent()
                zeta_o = spike_oracle(gen.beta_T, gen.beta_M, gen.c,
                                      gen.varsigma2).alignment
                acc_o_th = accuracy_from_alignment(zeta_o)
            else:
                acc_u_th = acc_o_th = 0.5  # no signal: accuracy is chance
            z_dir = mv.h / np.linalg.norm(mv.h) if h_norm > 0 else None

            def one(i, mv=mv, z_dir=z_dir, hi=hi, mi=mi):
                start = time.perf_counter()
                params = replace(mv, seed=derive_seed(cfg.master_seed, hi, mi, i))
                x, labels = sample_multiview(params)
                acc = {}
                acc["U"] = cluster_accuracy(unfolding_estimate(x, 2).vector,
                                            labels).accuracy
                if z_dir is not None:
                    acc["O"] = cluster_accuracy(oracle_estimate(x, z_dir).vector,
                                                labels).accuracy
                else:
                    acc["O"] = acc["U"]  # zero h: the oracle has nothing to weight
                _, v_est, _ = tensor_rank1_estimate(x, init="unfolding")
                acc["T"] = cluster_accuracy(v_est.vector, labels).accuracy
                return TrialRecord(trial=i, seed=params.seed, values=acc,
                                   wall_clock=time.perf_counter() - start)

            records = _run_trials(one, cfg.trials)
            sims = {k: np.array([r.values[k] for r in records]) for k in "UOT"}
            summary_rows.append(
                [_fmt(mu_norm), _fmt(h_norm), _fmt(acc_u_th), _fmt(acc_o_th)]
                + [s for k in "UOT" for s in (_fmt6(sims[k].mean()), _fmt6(sims[k].std()))]
                + [str(cfg.trials)])
            trial_rows.extend(
                [_fmt(mu_norm), _fmt(h_norm), str(r.trial), str(r.seed),
                 _fmt(r.values["U"]), _fmt(r.values["O"]), _fmt(r.values["T"])]
                for r in records)

    paths = [
        _write_csv(cfg, "benchmark.csv",
                   ["mu_norm", "h_norm", "acc_U_th", "acc_O_th",
                    "acc_U_sim_mean", "acc_U_sim_std", "acc_O_sim_mean",
                    "acc_O_sim_std", "acc_T_sim_mean", "acc_T_sim_std", "trials"],
                   summary_rows),
        _write_csv(cfg, "benchmark_trials.csv",
                   ["mu_norm", "h_norm", "trial", "seed", "acc_U", "acc_O", "acc_T"],
                   trial_rows),
    ]
    if cfg.emit_plots:
        paths.append(_plot_benchmark(cfg))
    return paths


def run_phase(cfg: ExperimentConfig) -> list[str]:
    """The phase-transition curve rho_T*(beta_M); grid values at or below the
    asymptote are kept as rows with an explanatory note instead of a value."""
    ratios = ShapeRatios.from_dims(cfg.n1, cfg.n2, cfg.n3)
    asymptote = (ratios.c1 * ratios.c2 / (1.0 - ratios.c3)) ** 0.25
    rows = []
    for beta in cfg.beta_grid:
        if beta > asymptote:
            rows.append([_fmt(beta), _fmt(phase_transition_rho(beta, ratios)), ""])
        else:
            rows.append([_fmt(beta), _fmt(math.nan), "below-asymptote"])
    paths = [_write_csv(cfg, "phase_curve.csv",
                        ["beta_M", "rho_star", "asymptote", "note"],
                        [[r[0], r[1], _fmt(asymptote), r[2]] for r in rows])]
    if cfg.emit_plots:
        paths.append(_plot_phase(cfg))
    return paths


EXPERIMENTS = {
    "esd2": run_esd2,
    "esd3": run_esd3,
    "alignment-map": run_alignment_map,
    "benchmark": run_benchmark,
    "phase": run_phase,
}


def _report(name, records, summary):
    total = sum(r.wall_clock for r in records) if records else 0.0
    stats = "  ".join(f"{k}={v:.4f}" for k, v in summary.items()
                      if not (isinstance(v, float) and math.isnan(v)))
    print(f"[{name}] {len(records)} trials in {total:.1f}s  {stats}")


# ---------------------------------------------------------------------------
# plots (optional; render from the emitted CSVs)

def _load_csv(cfg, name):
    path = os.path.join(cfg.out_dir, name)
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return np.genfromtxt(io.StringIO("".join(lines)), delimiter=",", names=True)


def _figure():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _save(plt, cfg, name):
    path = os.path.join(cfg.out_dir, name)
    plt.tight_layout()
    plt.savefig(path, dpi=150)
    plt.close()
    return path


def _plot_esd(cfg, prefix, spike_location):
    plt = _figure()
    hist = _load_csv(cfg, f"{prefix}_histogram.csv")
    lsd = _load_csv(cfg, f"{prefix}_lsd.csv")
    widths = hist["bin_right"] - hist["bin_left"]
    plt.bar(hist["bin_left"], hist["mass"] / widths, width=widths, align="edge",
            alpha=0.5, label="ESD")
    plt.plot(lsd["x"], lsd["density"], "r-", label="LSD")
    if spike_location is not None and not math.isnan(spike_location):
        plt.axvline(spike_location, color="g", linestyle="--", label="spike")
    plt.xlabel("eigenvalue")
    plt.ylabel("density")
    plt.legend()
    return _save(plt, cfg, f"{prefix}.png")


def _plot_alignment_map(cfg):
    plt = _figure()
    grid = _load_csv(cfg, "alignment_map_grid.csv")
    rho, beta = np.unique(grid["rho_T"]), np.unique(grid["beta_M"])
    z = grid["zeta_plus"].reshape(len(beta), len(rho))
    plt.pcolormesh(rho, beta, z, shading="auto")
    plt.colorbar(label="zeta+")
    curve = _load_csv(cfg, "alignment_map_curve.csv")
    if curve.size:
        marks = np.atleast_1d(curve)
        plt.plot(marks["rho_star"], marks["beta_M"], "w-", lw=2)
    plt.xlim(rho.min(), rho.max())
    plt.xlabel("rho_T")
    plt.ylabel("beta_M")
    return _save(plt, cfg, "alignment_map.png")


def _plot_benchmark(cfg):
    plt = _figure()
    data = np.atleast_1d(_load_csv(cfg, "benchmark.csv"))
    for h in np.unique(data["h_norm"]):
        rows = data[data["h_norm"] == h]
        plt.plot(rows["mu_norm"], rows["acc_U_th"], "--", label=f"U th, |h|={h:g}")
        plt.plot(rows["mu_norm"], rows["acc_U_sim_mean"], "o", label=f"U sim, |h|={h:g}")
        plt.plot(rows["mu_norm"], rows["acc_O_th"], ":", label=f"O th, |h|={h:g}")
        plt.plot(rows["mu_norm"], rows["acc_O_sim_mean"], "s", label=f"O sim, |h|={h:g}")
        plt.plot(rows["mu_norm"], rows["acc_T_sim_mean"], "^", label=f"T sim, |h|={h:g}")
    plt.xlabel("|mu|")
    plt.ylabel("accuracy")
    plt.legend(fontsize=7)
    return _save(plt, cfg, "benchmark.png")


def _plot_phase(cfg):
    plt = _figure()
    data = np.atleast_1d(_load_csv(cfg, "phase_curve.csv"))
    ok = ~np.isnan(data["rho_star"])
    plt.plot(data["beta_M"][ok], data["rho_star"][ok], "b-")
    plt.xlabel("beta_M")
    plt.ylabel("rho_T*")
    plt.yscale("log")
    return _save(plt, cfg, "phase_curve.png")

"""Spiked nested matrix-tensor model: simulation, spectral estimators, and
asymptotic predictions.

The model plants a rank-one signal x (x) y (x) z inside an order-3 Gaussian
tensor through a nested matrix stage; the package samples it, computes
centered-scaled Gram spectra of its unfoldings, evaluates the closed-form
limiting laws / spike locations / alignments, and runs the Monte Carlo
experiments that compare the two.
"""

# Version first: submodules read it back via `from . import __version__`.
__version__ = "0.1.0"

from .estimators import (ClusterResult, Estimate, alignment, cluster_accuracy,
                         oracle_estimate, tensor_rank1_estimate,
                         unfolding_estimate)
from .experiments import (ConfigError, ExperimentConfig, PRESETS, TrialRecord,
                          load_config, run_alignment_map, run_benchmark,
                          run_esd2, run_esd3, run_phase)
from .model import (GeneralParams, MultiViewParams, PlantedSignals, ShapeRatios,
                    beta_from_rho, beta_from_varrho, derive_seed, rho_from_beta,
                    sample_general, sample_multiview, varrho)
from .spectra import (EsdSummary, SpectrumResult, center_scale_mode2,
                      center_scale_mode3, esd, gram, sym_eigen)
from .tensor_core import (as_tensor3, frobenius, inner, kronecker, outer_mv,
                          outer_vvv, refold, unfold)
from .theory import (Law, SpikePrediction, accuracy_from_alignment,
                     bulk_edges_mode2, lsd_density_mode2, mp_atom_mass,
                     mp_density, mp_edges, mp_law, multiview_zeta,
                     phase_transition_rho, semicircle, semicircle_law, spike2,
                     spike3, spike_oracle, stieltjes_mode2)

__all__ = [
    "__version__",
    # tensor_core
    "as_tensor3", "unfold", "refold", "outer_mv", "outer_vvv", "kronecker",
    "inner", "frobenius",
    # model
    "ShapeRatios", "GeneralParams", "PlantedSignals", "MultiViewParams",
    "derive_seed", "sample_general", "sample_multiview", "rho_from_beta",
    "beta_from_rho", "varrho", "beta_from_varrho",
    # spectra
    "SpectrumResult", "gram", "center_scale_mode2", "center_scale_mode3",
    "sym_eigen", "EsdSummary", "esd",
    # theory
    "Law", "SpikePrediction", "stieltjes_mode2", "lsd_density_mode2",
    "bulk_edges_mode2", "semicircle", "semicircle_law", "mp_edges",
    "mp_atom_mass", "mp_density", "mp_law", "spike2", "spike3", "spike_oracle",
    "phase_transition_rho", "accuracy_from_alignment", "multiview_zeta",
    # estimators
    "Estimate", "ClusterResult", "unfolding_estimate", "oracle_estimate",
    "tensor_rank1_estimate", "alignment", "cluster_accuracy",
    # experiments
    "ConfigError", "ExperimentConfig", "TrialRecord", "PRESETS", "load_config",
    "run_esd2", "run_esd3", "run_alignment_map", "run_benchmark", "run_phase",
]

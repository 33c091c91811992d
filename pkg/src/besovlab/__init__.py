"""
besovlab: a numerical laboratory for Littlewood-Paley blocks, Besov norms
and the norm-discontinuity mechanism of the Camassa-Holm, b-family and
Novikov equations.

Modules:
    spectral_core     periodic grid, transforms, multipliers, quadrature
    littlewood_paley  dyadic partition of unity, blocks, Besov norms
    initial_data      bump, wave packets, series and power-law data
    pde_models        right-hand sides of the three equations
    evolution         RK4 time stepping, remainder and diagnostics
    experiments       the six verification experiments and their reports
    config, reporting, cli   run configuration, report files, command line
"""

from . import errors
from .errors import BesovLabError
from .evolution import EvolutionConfig, evolve, linear_predictor, remainder, solve, step_rk4
from .experiments import (
    ExperimentReport,
    Thresholds,
    exp_ch_lower_bound,
    exp_conservation,
    exp_discontinuity,
    exp_localization,
    exp_novikov_lower_bound,
    exp_remainder_scaling,
    list_experiments,
)
from .initial_data import (
    CHDataSpec,
    NovikovDataSpec,
    PacketSpec,
    c_sigma,
    make_bump,
    make_ch_data,
    make_novikov_data,
    make_packet,
)
from .littlewood_paley import BesovParams, besov_norm, block_norms, build_partition, lp_block
from .pde_models import CAMASSA_HOLM, NOVIKOV, ModelKind, b_family, degasperis_procesi, tendency
from .spectral_core import Grid, RealField, SpectralField, forward_transform, inverse_transform

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ExperimentReport",
    "Thresholds",
    "exp_ch_lower_bound",
    "exp_conservation",
    "exp_discontinuity",
    "exp_localization",
    "exp_novikov_lower_bound",
    "exp_remainder_scaling",
    "list_experiments",
    "CHDataSpec",
    "NovikovDataSpec",
    "PacketSpec",
    "c_sigma",
    "make_bump",
    "make_ch_data",
    "make_novikov_data",
    "make_packet",
    "BesovLabError",
    "EvolutionConfig",
    "evolve",
    "linear_predictor",
    "remainder",
    "solve",
    "step_rk4",
    "BesovParams",
    "besov_norm",
    "block_norms",
    "build_partition",
    "lp_block",
    "CAMASSA_HOLM",
    "NOVIKOV",
    "ModelKind",
    "b_family",
    "degasperis_procesi",
    "tendency",
    "Grid",
    "RealField",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
]

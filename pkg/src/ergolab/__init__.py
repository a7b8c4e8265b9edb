"""Desk-scale ergodic theory laboratory.

Exact rank-1 cutting-and-stacking towers, GF(2) shift events with exact
cylinder measures, finite-dimensional orthogonal-operator averages, and
seeded Gaussian/Poisson suspension simulators, plus a small experiment
runner used by the command line.
"""
from __future__ import annotations

from .tower import (
    ConstructionExhaustedError,
    ConstructionParams,
    FinitarySwap,
    GenerationError,
    InsufficientDepthError,
    LevelSet,
    RationalInterval,
    ScanEntry,
    TowerStage,
    apply_swap,
    build_stage,
    correlation_interval,
    depth_for,
    level_set_measure,
    level_width,
    refine_set,
    rigidity_scan,
    supp_level_set,
    symdiff_interval,
    wh_defect,
)
from .constructions import (
    RigidMixingPair,
    builtin_params,
    chacon,
    odometer,
    params_from_json,
    params_from_spec,
    params_to_json,
    params_to_spec,
    rigid_mixing_pair,
    staircase,
    theorem6_generate,
)
from .ledrapier import (
    SiteFunctional,
    base_event,
    event_measure,
    pair_measure,
    shift_functional,
    site_functional,
    symdiff_identity_check,
    triple_measure,
    xor_functionals,
)
from .mc import EstimateWithError, batch_estimate, batch_statistic_estimate
from .operators import (
    CesaroDefect,
    FiniteRankPerturbation,
    cesaro_square_average,
    cesaro_square_sweep,
    conjugate_average,
    conjugate_defect,
    make_operator,
    make_rotation_operator,
    majorant_decay_series,
    operator_correlation,
)
from .gaussian import (
    GaussianModel,
    gaussian_hermite_correlation,
    gaussian_wh_experiment,
    orthant_probability,
    triple_correlation_weakmix_check,
)
from .poisson import (
    PoissonModel,
    poisson_count_covariance,
    poisson_gof,
    poisson_wh_experiment,
)
from .reports import ExperimentReport, write_report_json, write_rows_csv
from .experiments import (
    EXPERIMENT_NAMES,
    ConfigError,
    default_config,
    resolve_config,
    run_experiment,
)

__version__ = "0.1.0"

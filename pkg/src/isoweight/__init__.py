"""Weighted isoperimetric regimes, rearrangements, and sharp constants.

The package studies quotients of a weighted perimeter by a power of a
weighted volume, together with the companion interpolation inequalities.
Modules: ``regime`` (verdicts, thresholds, sharp ball constants),
``geometry`` (star-shaped sets and their weighted functionals),
``rearrange`` (symmetrizations and their inequality checks), ``variation``
(second variation at the ball, shape search, one-dimensional solver),
``functionals`` (radial profiles, interpolation energies, eigenvalues),
and ``cli`` (the ``isoweight`` command).
"""

from .errors import ConvergenceError, DomainError, VerificationError
from .functionals import (
    CknInfimum,
    LorentzComparison,
    RadialProfile,
    ckn_energy,
    ckn_radial_infimum,
    eigenvalue_radial,
    hardy_constant,
    lorentz_imbedding_check,
    lorentz_norm,
    q_functional,
)
from .geometry import (
    IntervalUnion,
    OffsetBall,
    StarShape,
    interval_ratio,
    invert_shape,
    mu_exterior,
    mu_measure,
    offset_ball_ratio,
    perimeter,
    power_map_shape,
    ratio,
    ratio_inverted,
)
from .rearrange import (
    RadialDecreasing,
    SampledFunction,
    WeightedRearrangement,
    ball_indicator,
    decreasing_rearrangement_weighted,
    hardy_littlewood_check,
    polya_szego_check,
    schwarz_symmetrize,
    starshaped_rearrange,
    zeta_uniform_radial_grid,
)
from .regime import (
    INVERTED,
    RADIAL_OPTIMAL,
    STANDARD,
    SYMMETRY_BROKEN,
    UNKNOWN,
    ZERO_INFIMUM,
    CknParams,
    Params,
    RegimeReport,
    c_rad,
    c_rad_inverted,
    ckn_radial_symmetry_sufficient,
    ckn_thresholds,
    classify,
    l_one,
    l_star_exact_nonpos_k,
    l_upper,
    radial_certificate,
)
from .variation import (
    DEFAULT_SEED,
    MinimizeResult,
    OneDSolution,
    PerturbationMode,
    PerturbedFamily,
    finite_difference_variation_check,
    interval_brute_force,
    minimize_ratio,
    second_variation,
    solve_1d,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "VerificationError",
    "CknInfimum",
    "LorentzComparison",
    "RadialProfile",
    "ckn_energy",
    "ckn_radial_infimum",
    "eigenvalue_radial",
    "hardy_constant",
    "lorentz_imbedding_check",
    "lorentz_norm",
    "q_functional",
    "IntervalUnion",
    "OffsetBall",
    "StarShape",
    "interval_ratio",
    "invert_shape",
    "mu_exterior",
    "mu_measure",
    "offset_ball_ratio",
    "perimeter",
    "power_map_shape",
    "ratio",
    "ratio_inverted",
    "RadialDecreasing",
    "SampledFunction",
    "WeightedRearrangement",
    "ball_indicator",
    "decreasing_rearrangement_weighted",
    "hardy_littlewood_check",
    "polya_szego_check",
    "schwarz_symmetrize",
    "starshaped_rearrange",
    "zeta_uniform_radial_grid",
    "INVERTED",
    "RADIAL_OPTIMAL",
    "STANDARD",
    "SYMMETRY_BROKEN",
    "UNKNOWN",
    "ZERO_INFIMUM",
    "CknParams",
    "Params",
    "RegimeReport",
    "c_rad",
    "c_rad_inverted",
    "ckn_radial_symmetry_sufficient",
    "ckn_thresholds",
    "classify",
    "l_one",
    "l_star_exact_nonpos_k",
    "l_upper",
    "radial_certificate",
    "DEFAULT_SEED",
    "MinimizeResult",
    "OneDSolution",
    "PerturbationMode",
    "PerturbedFamily",
    "finite_difference_variation_check",
    "interval_brute_force",
    "minimize_ratio",
    "second_variation",
    "solve_1d",
    "__version__",
]

__version__ = "0.1.0"

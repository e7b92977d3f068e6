"""Exact map enumeration, discrete Painleve dynamics and center-manifold expansions."""

from __future__ import annotations

from .errors import *  # noqa: F401,F403
from .exact import (
    BigFloat,
    ExactRational,
    ParamRationalFunction,
    bernoulli_numbers,
    binomial,
    bigfloat,
    combinatorial_primitives,
    double_factorial,
    hypergeom_2f1_terminating,
    param_function,
    pochhammer,
)
from .series import TruncatedSeries, series_reversion
from .oracle import GenusHistogram, RotationMap, enumerate_matchings_by_genus, genus_of_map, labeled_to_unlabeled, min_vertices
from .genfun import (
    GeneratingFunctionData,
    QVector,
    band_matrix,
    closed_form_g5,
    count_contraction,
    count_from_q,
    hypergeom_count,
    q_orbit,
    q_step,
    r_vector,
    trivalent_counts,
    z0_series,
)
from .painleve import (
    DP1State,
    MixedState,
    MixedSFUZWState,
    OrbitRecord,
    SFUState,
    WeightParams,
    dp1_step,
    fixed_point_analysis,
    freud_seed,
    mixed_sfuzw_step,
    mixed_step,
    planar_restricted_step,
    qrt_cubic_step,
    qrt_invariant,
    sfu_inverse,
    sfu_step,
    sfu_transform,
)
from .center_manifold import AsymptoticExpansion, CMExpansion, cm_expand, invert_to_n, orbit_distance
from .conjectures import VerificationReport, cg_bernoulli_check, conjecture1_check, interlacing_check

__version__ = "0.1.0"

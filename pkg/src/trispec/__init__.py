"""Spectral-limit toolkit for random tridiagonal matrix ensembles.

Three mutually cross-validating routes to the limiting empirical spectral
distribution of tridiagonal random matrices: direct eigenvalue simulation,
path-combinatorial moment formulas, and Stieltjes-transform fixed-point /
scale-mixture analysis.
"""

__version__ = "0.1.0"

from trispec.core import (
    ComplexUHP,
    EmpiricalMeasure,
    EntryDistribution,
    SeedSpec,
    ks_distance,
    measure_from_samples,
    wasserstein1,
)
from trispec.ensembles import (
    TridiagonalMatrix,
    sample_alpha,
    sample_deformed,
    sample_simple,
    trace_power,
    word_trace,
)
from trispec.eigensolve import (
    SpectralSample,
    char_poly_eval,
    eigenvalues,
    hoffman_wielandt_gap,
    sturm_count,
)
from trispec.pathmoments import (
    ColoredWord,
    CrossingProfile,
    LatticePath,
    crossing_profile,
    enumerate_bridges,
    joint_moment,
    limit_moment,
    mixture_moment,
)
from trispec.sigmaseq import (
    SigmaSequence,
    commutator_hs_norm,
    mesh,
    power_profile,
    quantile_profile,
    tail_second_moment,
)
from trispec.stieltjes import (
    ParticlePopulation,
    TransformGrid,
    arcsine_transform,
    compose_transform,
    corner_recursion,
    empirical_transform,
    invert_density,
    particle_fixpoint,
    scale_mixture_transform,
    semicircle_transform,
)
from trispec.reference_laws import (
    BernoulliLimit,
    bernoulli_limit,
    toeplitz_esd,
    ullmann_moment,
    ullmann_sample,
)

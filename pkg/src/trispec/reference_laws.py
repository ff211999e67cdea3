"""Closed-form oracle laws: the Toeplitz/arcsine family, the power-mixture
moments, and the coupling-dilution (Bernoulli) block mixture."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from trispec.core import EmpiricalMeasure, SeedSpec, measure_from_samples
from trispec.stieltjes import _checked, as_uhp_complex, branch_sqrt

__all__ = [
    "toeplitz_esd",
    "ullmann_moment",
    "ullmann_sample",
    "BernoulliLimit",
    "bernoulli_limit",
    "bernoulli_transform_heuristic",
    "arcsine_cdf",
    "arcsine_density",
    "semicircle_density",
]


def _chebyshev_node(j: int, n: int) -> float:
    """2*cos(pi * j/n) evaluated on the reduced fraction.

    Reducing first makes equal eigenvalues of different Toeplitz sizes
    collide exactly in floats (cos(pi*1/3) and cos(pi*2/6) would otherwise
    round differently), and the mirror rule keeps the spectrum exactly
    symmetric with an exact 0.
    """
    g = math.gcd(j, n)
    num, den = j // g, n // g
    if 2 * num == den:
        return 0.0
    if 2 * num < den:
        return 2.0 * math.cos(math.pi * num / den)
    return -2.0 * math.cos(math.pi * (den - num) / den)


def toeplitz_esd(k: int) -> EmpiricalMeasure:
    """Spectral law of the k x k tridiagonal Toeplitz matrix (0 diagonal,
    unit couplings): atoms 2*cos(j*pi/(k+1)), each with weight 1/k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    atoms = sorted(_chebyshev_node(j, k + 1) for j in range(1, k + 1))
    return EmpiricalMeasure(np.asarray(atoms), np.full(k, 1.0 / k))


def ullmann_moment(k: int, alpha=0):
    """Moments of T^alpha * X, T uniform(0,1), X arcsine on [-2, 2]:
    0 for odd k and C(k, k/2)/(alpha*k + 1) for even k.

    Fraction-valued alpha keeps the result an exact rational.
    """
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if k % 2:
        return 0
    return math.comb(k, k // 2) / (alpha * k + 1)


def ullmann_sample(n: int, alpha: float, seed: SeedSpec) -> EmpiricalMeasure:
    """n i.i.d. draws of U**alpha * 2*cos(pi*V), U, V independent uniform."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed.generator()
    u = rng.random(n)
    v = rng.random(n)
    return measure_from_samples(u**alpha * 2.0 * np.cos(math.pi * v))


@dataclass(frozen=True)
class BernoulliLimit:
    """Truncated block mixture for Bernoulli(p) couplings.

    A coupling pattern with P(b=1) = p splits the matrix into unit
    Toeplitz blocks whose size is geometric; a site lands in a size-k
    block with probability k * q^2 * p^(k-1), so each eigenvalue atom of
    the k-block law carries weight q^2 * p^(k-1).  (The displayed series
    in the source material omits the size-biasing factor k; that omission
    does not normalize and disagrees with simulation, see the tests.)
    Mass beyond the truncation order is parked on an explicit atom at 0,
    so the total is exactly 1 and the parked remainder stays inspectable.
    """

    p: float
    q: float
    truncation: int
    measure: EmpiricalMeasure
    remainder_mass: float
    zero_mass_series: float

    def zero_mass_total(self) -> float:
        """Weight at location 0 including the parked remainder."""
        return self.measure.mass_at(0.0)


def bernoulli_limit(p: float, K: int) -> BernoulliLimit:
    """Mixture of toeplitz_esd(k), k <= K, with size-biased geometric weights."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if K < 1:
        raise ValueError("truncation order must be >= 1")
    q = 1.0 - p
    locs: list[float] = []
    wts: list[float] = []
    placed = 0.0
    zero_series = 0.0
    for k in range(1, K + 1):
        per_atom = q * q * p ** (k - 1)
        comp = toeplitz_esd(k)
        locs.extend(comp.locations.tolist())
        wts.extend([per_atom] * k)
        placed += per_atom * k
        if k % 2:
            zero_series += per_atom
    remainder = 1.0 - placed
    locs.append(0.0)
    wts.append(remainder)
    measure = EmpiricalMeasure.from_atoms(locs, wts, merge=True)
    return BernoulliLimit(p=p, q=q, truncation=K, measure=measure,
                          remainder_mass=remainder, zero_mass_series=zero_series)


def bernoulli_transform_heuristic(z, p: float) -> complex:
    """Three-term transform guess q^2/z + 2qp/(z-s) + p^2/(z-2s).

    Non-normative: the underlying fixed point s is not pinned down by the
    source material, so s is taken as the semicircle fixed point
    s = 1/(z - s).  Exposed for comparison against the series law only;
    the tests report its disagreement rather than asserting agreement.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    z = as_uhp_complex(z)
    q = 1.0 - p
    s = (z - branch_sqrt(z * z - 4.0)) / 2.0
    val = q * q / z + 2.0 * q * p / (z - s) + p * p / (z - 2.0 * s)
    return _checked(val, z)


def arcsine_cdf(x, r: float = 2.0):
    """CDF of the arcsine law on [-r, r]."""
    t = np.clip(np.asarray(x, dtype=float) / r, -1.0, 1.0)
    out = 0.5 + np.arcsin(t) / math.pi
    return float(out) if out.ndim == 0 else out


def arcsine_density(x, r: float = 2.0):
    """Density 1/(pi * sqrt(r^2 - x^2)) inside (-r, r)."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < r
    out = np.zeros_like(x)
    out[inside] = 1.0 / (math.pi * np.sqrt(r * r - x[inside] ** 2))
    return float(out) if out.ndim == 0 else out


def semicircle_density(x, r: float = 2.0):
    """Normalized semicircle density 2*sqrt(r^2 - x^2)/(pi r^2) on [-r, r]."""
    x = np.asarray(x, dtype=float)
    sq = np.maximum(r * r - x * x, 0.0)
    out = 2.0 * np.sqrt(sq) / (math.pi * r * r)
    return float(out) if out.ndim == 0 else out

"""Deformation profiles for the off-diagonal couplings and their diagnostics.

A profile is the deterministic multiplier sequence applied to the N-1
couplings of an N x N tridiagonal matrix.  Besides the power-law family,
profiles can be built from any target law via its quantile function, with
a guaranteed vanishing mesh (max adjacent gap) and empirical convergence
to the target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, TYPE_CHECKING

import numpy as np

from trispec.core import EmpiricalMeasure, measure_from_samples, wasserstein1

if TYPE_CHECKING:  # pragma: no cover
    from trispec.ensembles import TridiagonalMatrix

__all__ = [
    "SigmaSequence",
    "power_profile",
    "quantile_profile",
    "mesh",
    "tail_second_moment",
    "commutator_hs_norm",
    "quantile_uniform",
    "quantile_exponential",
    "quantile_pareto",
    "quantile_constant",
    "quantile_from_samples",
    "parse_sigma_target",
    "target_measure",
    "sigma_to_csv",
    "sigma_from_csv",
]

QuantileFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SigmaSequence:
    """Profile values for the N-1 couplings of an N x N matrix.

    ``padding`` records how many slots of a quantile construction were
    filled with duplicates of the lower window edge; it is 0 for profiles
    built any other way.
    """

    values: np.ndarray
    N: int
    padding: int = field(default=0, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size != self.N - 1:
            raise ValueError("profile must have exactly N-1 values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("profile values must be finite")
        vals = np.ascontiguousarray(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    @property
    def padding_fraction(self) -> float:
        return self.padding / max(len(self), 1)

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self) else 0.0

    def empirical_measure(self) -> EmpiricalMeasure:
        return measure_from_samples(self.values)


def power_profile(N: int, alpha: float) -> SigmaSequence:
    """values[k] = ((k+1)/N)**alpha, the profile of the alpha-scaled model."""
    if N < 2:
        raise ValueError("power profile needs N >= 2")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    k = np.arange(1, N, dtype=float)
    return SigmaSequence((k / N) ** alpha, N)


def _eval_quantiles(fn: QuantileFn, us: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(fn(us), dtype=float)
        if vals.shape != us.shape:
            raise TypeError
    except TypeError:
        vals = np.asarray([fn(u) for u in us], dtype=float)
    return vals


def quantile_profile(N: int, quantile_fn: QuantileFn) -> SigmaSequence:
    """Profile of length N-1 whose empirical law approximates a target.

    Construction: clamp to a central probability window so the value range
    is at most sqrt(N), place equi-spaced quantile points there, bridge any
    adjacent gap larger than the target step 1/log(N+1) with arithmetic
    progressions, and fill the leftover slots with duplicates of the lower
    window edge.  The emitted sequence is sorted nondecreasing and its mesh
    is at most 1/log(N+1) for continuous targets.
    """
    if N < 4:
        raise ValueError("quantile profile needs N >= 4")
    slots = N - 1
    sqrt_n = math.sqrt(N)

    def window_range(eps: float) -> float:
        lo, hi = _eval_quantiles(quantile_fn, np.array([eps, 1.0 - eps]))
        return hi - lo

    if not math.isfinite(window_range(0.5)):
        raise ValueError("target has no finite quantiles near 1/2")

    # infimum of {eps: range <= sqrt(N)} by bisection; the range is
    # nonincreasing in eps and 0 at eps = 1/2.  The window is floored at
    # 1e-12 so 1 - eps stays representable and quantile tails beyond any
    # desk-scale resolution are never requested.
    floor = 1e-12
    lo, hi = floor, 0.5
    if window_range(floor) > sqrt_n:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if window_range(mid) <= sqrt_n:
                hi = mid
            else:
                lo = mid
    else:
        hi = floor
    eps = hi
    lower_edge, upper_edge = _eval_quantiles(quantile_fn, np.array([eps, 1.0 - eps]))
    if not (math.isfinite(lower_edge) and math.isfinite(upper_edge)):
        raise ValueError("window edges are not finite")
    width = upper_edge - lower_edge

    delta = 1.0 / math.log(N + 1)
    budget = math.ceil(width / delta) + 2
    n_core = slots - budget
    if n_core <= 0:
        raise ValueError("N too small for this target's quantile range")

    us = eps + np.arange(1, n_core + 1, dtype=float) * (1.0 - 2.0 * eps) / (n_core + 1)
    core = _eval_quantiles(quantile_fn, us)
    if not np.all(np.isfinite(core)):
        raise ValueError("quantile function returned non-finite core values")
    if np.any(np.diff(core) < 0):
        raise ValueError("quantile function is not monotone on the sampled grid")

    bridges: list[float] = []
    gaps = np.diff(core)
    for i in np.nonzero(gaps > delta)[0]:
        s, t = core[i], core[i + 1]
        ell = max(0, math.ceil((t - s) / delta) - 1)
        if ell:
            step = (t - s) / (ell + 1)
            bridges.extend(s + step * np.arange(1, ell + 1))
    if len(bridges) > budget:
        raise RuntimeError("bridge budget exceeded; quantile function misbehaves")

    padding = budget - len(bridges)
    vals = np.concatenate([core, np.asarray(bridges), np.full(padding, lower_edge)])
    vals.sort()
    return SigmaSequence(vals, N, padding=padding)


def mesh(s: SigmaSequence) -> float:
    """Largest absolute gap between adjacent profile values (0 if < 2 values)."""
    if len(s) < 2:
        return 0.0
    return float(np.max(np.abs(np.diff(s.values))))


def tail_second_moment(s: SigmaSequence, M: float) -> float:
    """(1/(N-1)) sum of sigma^2 over entries with |sigma| > M."""
    v = s.values
    if v.size == 0:
        return 0.0
    sel = np.abs(v) > M
    return float(np.sum(v[sel] ** 2) / v.size)


def commutator_hs_norm(s: SigmaSequence, m: "TridiagonalMatrix") -> float:
    """Normalized Hilbert-Schmidt norm of the profile/matrix commutator.

    Computed in O(N) from adjacent profile increments weighted by the
    co-located raw couplings; ``m`` must be the undeformed matrix.  The
    result is checked against the exact bound mesh * sqrt(2 * mean(b^2)).
    """
    b = m.offdiag
    if len(s) != b.size:
        raise ValueError("profile length must match the matrix off-diagonal length")
    n = s.N
    if len(s) < 2:
        return 0.0
    dsig = np.diff(s.values)
    sq = 2.0 * np.sum(dsig**2 * b[:-1] ** 2) / n
    out = math.sqrt(sq)
    bound = mesh(s) * math.sqrt(2.0 * float(np.sum(b**2)) / n)
    if out > bound * (1.0 + 1e-12) + 1e-300:
        raise AssertionError("commutator norm exceeded its mesh bound")
    return out


# -- target quantile functions ------------------------------------------


def quantile_uniform(a: float, b: float) -> QuantileFn:
    return lambda u: a + (b - a) * np.asarray(u, dtype=float)


def quantile_exponential(rate: float = 1.0) -> QuantileFn:
    return lambda u: -np.log1p(-np.asarray(u, dtype=float)) / rate


def quantile_pareto(scale: float, shape: float) -> QuantileFn:
    return lambda u: scale * (1.0 - np.asarray(u, dtype=float)) ** (-1.0 / shape)


def quantile_constant(c: float) -> QuantileFn:
    return lambda u: np.full_like(np.asarray(u, dtype=float), c)


def quantile_from_samples(samples) -> QuantileFn:
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size

    def q(u):
        u = np.asarray(u, dtype=float)
        idx = np.clip(np.ceil(u * n).astype(int) - 1, 0, n - 1)
        return xs[idx]

    return q


def parse_sigma_target(text: str) -> tuple[QuantileFn, bool, str]:
    """Parse a CLI target spec; returns (quantile_fn, bounded, label).

    ``bounded`` reports whether the target law has bounded support, the
    hypothesis required by the scale-mixture moment route (the truncation
    route accepts any finite-second-moment target).
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    args = [float(v) for v in rest.split(",")] if rest and kind != "empirical" else []
    if kind == "uniform":
        a, b = args
        return quantile_uniform(a, b), True, f"uniform({a},{b})"
    if kind == "exponential":
        (rate,) = args or [1.0]
        return quantile_exponential(rate), False, f"exponential({rate})"
    if kind == "pareto":
        scale, shape = args
        return quantile_pareto(scale, shape), False, f"pareto({scale},{shape})"
    if kind == "constant":
        (c,) = args
        return quantile_constant(c), True, f"constant({c})"
    if kind == "empirical":
        data = np.loadtxt(rest, dtype=float, ndmin=1)
        return quantile_from_samples(data), True, f"empirical[n={data.size}]"
    raise ValueError(f"unknown sigma target {text!r}")


def target_measure(quantile_fn: QuantileFn, atoms: int = 1_000_000) -> EmpiricalMeasure:
    """Fine discretization of a target law at midpoint quantiles."""
    us = (np.arange(atoms, dtype=float) + 0.5) / atoms
    return measure_from_samples(_eval_quantiles(quantile_fn, us))


def w1_to_target(s: SigmaSequence, quantile_fn: QuantileFn, atoms: int = 1_000_000) -> float:
    """Wasserstein-1 distance between the profile and a target law."""
    return wasserstein1(s.empirical_measure(), target_measure(quantile_fn, atoms))


def sigma_to_csv(s: SigmaSequence, path) -> None:
    np.savetxt(path, s.values, fmt="%.17g")


def sigma_from_csv(path) -> SigmaSequence:
    vals = np.loadtxt(path, dtype=float, ndmin=1)
    return SigmaSequence(vals, vals.size + 1)

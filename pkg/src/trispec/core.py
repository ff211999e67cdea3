"""Shared domain types: entry laws, seeded streams, and measure arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ComplexUHP",
    "SeedSpec",
    "EntryDistribution",
    "EmpiricalMeasure",
    "measure_from_samples",
    "ks_distance",
    "ks_to_cdf",
    "wasserstein1",
]

WEIGHT_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ComplexUHP:
    """A spectral parameter in the open upper half-plane.

    The constructor rejects ``im <= 0``; every transform in this package
    evaluates at such points only.
    """

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("spectral parameter must be finite")
        if self.im <= 0.0:
            raise ValueError(f"Im z must be > 0, got {self.im}")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def of(cls, z: "complex | ComplexUHP") -> "ComplexUHP":
        if isinstance(z, ComplexUHP):
            return z
        z = complex(z)
        return cls(z.real, z.imag)


def as_uhp_complex(z: "complex | ComplexUHP") -> complex:
    """Coerce to a plain complex after validating membership in C+."""
    return ComplexUHP.of(z).value


@dataclass(frozen=True)
class SeedSpec:
    """Counter-based random stream identity.

    The stream is ``Generator(Philox(key=master_seed,
    counter=stream_index << 128))``: a fixed pure function of
    ``(master_seed, stream_index)``, so replicas drawn on different
    stream indices are reproducible and independent of scheduling.
    Each stream has 2**128 states before any counter overlap.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in 64 bits")
        if not 0 <= int(self.stream_index) < 2**128:
            raise ValueError("stream_index must be a nonnegative 128-bit integer")

    def generator(self) -> np.random.Generator:
        bitgen = np.random.Philox(key=int(self.master_seed),
                                  counter=int(self.stream_index) << 128)
        return np.random.Generator(bitgen)

    def replica(self, r: int) -> "SeedSpec":
        """Stream for replica ``r`` under the same master seed."""
        return SeedSpec(self.master_seed, r)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


class EntryDistribution:
    """Parametric law of the off-diagonal entries (and optional diagonal).

    Moments are exact closed forms, never Monte Carlo estimates; a moment
    with no closed form (diverging Pareto moments) raises.  Laws with
    infinite variance are flagged so that samplers requiring square
    integrable entries can reject them.
    """

    _KINDS = ("constant", "bernoulli", "gaussian", "uniform", "pareto", "empirical")

    def __init__(self, kind: str, params: tuple, samples: np.ndarray | None = None):
        if kind not in self._KINDS:
            raise ValueError(f"unknown law kind {kind!r}")
        self.kind = kind
        self.params = params
        self._samples = samples

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, c: float) -> "EntryDistribution":
        return cls("constant", (float(c),))

    @classmethod
    def bernoulli(cls, p: float) -> "EntryDistribution":
        if not 0.0 <= p <= 1.0:
            raise ValueError("bernoulli parameter must be in [0, 1]")
        return cls("bernoulli", (float(p),))

    @classmethod
    def gaussian(cls, mean: float, sd: float) -> "EntryDistribution":
        if sd < 0:
            raise ValueError("standard deviation must be >= 0")
        return cls("gaussian", (float(mean), float(sd)))

    @classmethod
    def uniform(cls, a: float, b: float) -> "EntryDistribution":
        if not b > a:
            raise ValueError("uniform law needs a < b")
        return cls("uniform", (float(a), float(b)))

    @classmethod
    def pareto(cls, scale: float, shape: float) -> "EntryDistribution":
        if scale <= 0 or shape <= 0:
            raise ValueError("pareto scale and shape must be > 0")
        return cls("pareto", (float(scale), float(shape)))

    @classmethod
    def empirical(cls, samples: Iterable[float]) -> "EntryDistribution":
        arr = np.asarray(list(samples), dtype=float)
        if arr.size == 0:
            raise ValueError("empirical law needs at least one sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("empirical samples must be finite")
        return cls("empirical", (int(arr.size),), samples=_readonly(arr))

    @classmethod
    def parse(cls, text: str) -> "EntryDistribution":
        """Parse a CLI spec such as ``constant:1`` or ``gaussian:0,1``."""
        kind, _, rest = text.partition(":")
        kind = kind.strip().lower()
        if kind == "empirical":
            data = np.loadtxt(rest, dtype=float, ndmin=1)
            return cls.empirical(data)
        args = [float(v) for v in rest.split(",")] if rest else []
        try:
            ctor = {
                "constant": cls.constant,
                "bernoulli": cls.bernoulli,
                "gaussian": cls.gaussian,
                "uniform": cls.uniform,
                "pareto": cls.pareto,
            }[kind]
        except KeyError:
            raise ValueError(f"unknown law spec {text!r}") from None
        return ctor(*args)

    # -- exact moments ---------------------------------------------------

    def moment(self, k: int) -> float:
        """Exact k-th raw moment; raises when the moment diverges."""
        if k < 0:
            raise ValueError("moment order must be >= 0")
        if k == 0:
            return 1.0
        if self.kind == "constant":
            (c,) = self.params
            return c**k
        if self.kind == "bernoulli":
            (p,) = self.params
            return p
        if self.kind == "gaussian":
            mean, sd = self.params
            total = 0.0
            for j in range(0, k + 1, 2):
                total += math.comb(k, j) * mean ** (k - j) * sd**j * _double_factorial(j - 1)
            return total
        if self.kind == "uniform":
            a, b = self.params
            return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))
        if self.kind == "pareto":
            scale, shape = self.params
            if k >= shape:
                raise ValueError(
                    f"pareto(shape={shape}) has no finite moment of order {k}")
            return shape * scale**k / (shape - k)
        # empirical: the law is the discrete uniform over the samples
        return float(np.mean(self._samples**k))

    def mean(self) -> float:
        return self.moment(1)

    def second_moment(self) -> float:
        """E(b^2); +inf for infinite-variance laws (Pareto shape <= 2)."""
        if self.kind == "pareto" and self.params[1] <= 2.0:
            return math.inf
        return self.moment(2)

    @property
    def has_finite_second_moment(self) -> bool:
        return math.isfinite(self.second_moment())

    def moment_fn(self):
        """The law's moment sequence as a plain accessor ``k -> m_k``."""
        return self.moment

    # -- sampling --------------------------------------------------------

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 0:
            raise ValueError("sample size must be >= 0")
        if self.kind == "constant":
            return np.full(n, self.params[0])
        if self.kind == "bernoulli":
            return (rng.random(n) < self.params[0]).astype(float)
        if self.kind == "gaussian":
            mean, sd = self.params
            return mean + sd * rng.standard_normal(n)
        if self.kind == "uniform":
            a, b = self.params
            return a + (b - a) * rng.random(n)
        if self.kind == "pareto":
            scale, shape = self.params
            return scale * (rng.pareto(shape, n) + 1.0)
        return rng.choice(self._samples, size=n, replace=True)

    # -- misc --------------------------------------------------------------

    def label(self) -> str:
        if self.kind == "empirical":
            return f"empirical[n={self.params[0]}]"
        return f"{self.kind}({', '.join(repr(p) for p in self.params)})"

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"EntryDistribution.{self.label()}"


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Finite atomic probability measure with sorted locations.

    Weights are explicit (not an implied 1/n) so that unequal-weight
    mixtures are representable exactly; they must sum to 1 within 1e-12.
    """

    locations: np.ndarray
    weights: np.ndarray
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if not self._skip_checks:
            if loc.ndim != 1 or loc.shape != w.shape or loc.size == 0:
                raise ValueError("locations and weights must be matching 1-d nonempty arrays")
            if not np.all(np.isfinite(loc)):
                raise ValueError("atom locations must be finite")
            if np.any(w <= 0):
                raise ValueError("atom weights must be positive")
            if abs(math.fsum(w.tolist()) - 1.0) > WEIGHT_TOL:
                raise ValueError("weights must sum to 1 within 1e-12")
            if np.any(np.diff(loc) < 0):
                order = np.argsort(loc, kind="stable")
                loc = loc[order]
                w = w[order]
        object.__setattr__(self, "locations", _readonly(loc))
        object.__setattr__(self, "weights", _readonly(w))

    @classmethod
    def from_atoms(cls, locations, weights, merge: bool = False) -> "EmpiricalMeasure":
        m = cls(np.asarray(locations, dtype=float), np.asarray(weights, dtype=float))
        if merge:
            loc, inverse = np.unique(m.locations, return_inverse=True)
            w = np.zeros_like(loc)
            np.add.at(w, inverse, m.weights)
            m = cls(loc, w)
        return m

    @property
    def size(self) -> int:
        return self.locations.size

    def moment(self, k: int) -> float:
        """sum_i w_i x_i^k, accumulated in sorted-location order."""
        return float(np.sum(self.weights * self.locations**k))

    def mean(self) -> float:
        return self.moment(1)

    def cdf(self, x) -> np.ndarray | float:
        """Right-continuous CDF  P(X <= x)."""
        cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        idx = np.searchsorted(self.locations, np.asarray(x, dtype=float), side="right")
        out = cum[idx]
        return float(out) if np.isscalar(x) else out

    def mass_at(self, x: float, atol: float = 0.0) -> float:
        """Total weight of atoms within ``atol`` of ``x`` (exact by default)."""
        sel = np.abs(self.locations - x) <= atol
        return float(np.sum(self.weights[sel]))

    def support(self) -> tuple[float, float]:
        return float(self.locations[0]), float(self.locations[-1])


def measure_from_samples(samples: Sequence[float]) -> EmpiricalMeasure:
    """Uniform-weight measure on a sample list (duplicates kept as repeats)."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("samples must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples must be finite")
    arr = np.sort(arr)
    w = np.full(arr.size, 1.0 / arr.size)
    return EmpiricalMeasure(arr, w)


def _union_grid(a: EmpiricalMeasure, b: EmpiricalMeasure) -> np.ndarray:
    return np.union1d(a.locations, b.locations)


def ks_distance(a: EmpiricalMeasure, b: EmpiricalMeasure) -> float:
    """Sup-norm distance between CDFs, exact over the union of atoms."""
    xs = _union_grid(a, b)
    return float(np.max(np.abs(a.cdf(xs) - b.cdf(xs))))


def ks_to_cdf(a: EmpiricalMeasure, cdf) -> float:
    """Exact KS distance between an atomic measure and a continuous CDF.

    The supremum over each step interval is attained at an atom, approached
    from the left or the right, so both one-sided gaps are examined.
    """
    xs = a.locations
    fa = np.asarray(a.cdf(xs))
    fb = np.asarray(cdf(xs), dtype=float)
    left = np.concatenate(([0.0], fa[:-1]))
    return float(max(np.max(np.abs(fa - fb)), np.max(np.abs(left - fb))))


def wasserstein1(a: EmpiricalMeasure, b: EmpiricalMeasure) -> float:
    """Exact order-1 Wasserstein distance on the line.

    Computed as the integral of |CDF_a - CDF_b| over the union breakpoints,
    which equals the L1 distance between quantile functions.
    """
    xs = _union_grid(a, b)
    if xs.size == 1:
        return 0.0
    gaps = np.abs(np.asarray(a.cdf(xs[:-1])) - np.asarray(b.cdf(xs[:-1])))
    return float(np.sum(gaps * np.diff(xs)))

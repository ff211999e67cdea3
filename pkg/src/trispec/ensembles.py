"""Samplers for the simple, power-scaled, and profile-deformed tridiagonal models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from trispec.core import EntryDistribution, SeedSpec
from trispec.sigmaseq import SigmaSequence, power_profile

__all__ = [
    "TridiagonalMatrix",
    "sample_simple",
    "sample_deformed",
    "sample_alpha",
    "trace_power",
    "word_trace",
]


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix stored as two value arrays.

    ``offdiag[i]`` couples rows i and i+1 (0-based row order); the paper
    convention that labels couplings from the matrix bottom is the
    reversal of this ordering, a similarity that leaves every spectral
    quantity unchanged.
    """

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise ValueError("need len(offdiag) == len(diag) - 1 >= 0")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("matrix entries must be finite")
        for arr in (d, e):
            arr = np.ascontiguousarray(arr)
        d = np.ascontiguousarray(d)
        e = np.ascontiguousarray(e)
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def N(self) -> int:
        return self.diag.size

    def frobenius_sq(self) -> float:
        """||X||_F^2 = sum diag^2 + 2 sum offdiag^2 (exact identity)."""
        return float(np.sum(self.diag**2) + 2.0 * np.sum(self.offdiag**2))

    def trace(self) -> float:
        return float(np.sum(self.diag))

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        n = self.N
        if n > 1:
            a[np.arange(n - 1), np.arange(1, n)] = self.offdiag
            a[np.arange(1, n), np.arange(n - 1)] = self.offdiag
        return a


def _require_l2(law: EntryDistribution, role: str) -> None:
    if not law.has_finite_second_moment:
        raise ValueError(f"{role} law {law.label()} has infinite variance; "
                         "square-integrable entries are required")


def sample_simple(N: int, entry_law: EntryDistribution, seed: SeedSpec) -> TridiagonalMatrix:
    """Zero-diagonal matrix with N-1 i.i.d. off-diagonal couplings."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_l2(entry_law, "entry")
    rng = seed.generator()
    off = entry_law.sample(N - 1, rng)
    return TridiagonalMatrix(np.zeros(N), off)


def sample_deformed(
    N: int,
    offdiag_law: EntryDistribution,
    diag_law: EntryDistribution | None,
    sigma: SigmaSequence,
    seed: SeedSpec,
) -> TridiagonalMatrix:
    """Matrix with couplings sigma[i] * b_i and optional random diagonal.

    Off-diagonal entries are drawn before diagonal ones, so a run with
    sigma identically 1 and no diagonal law reproduces ``sample_simple``
    bit for bit under the same seed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if len(sigma) != N - 1:
        raise ValueError(f"profile has {len(sigma)} values, need N-1 = {N - 1}")
    _require_l2(offdiag_law, "off-diagonal")
    rng = seed.generator()
    off = sigma.values * offdiag_law.sample(N - 1, rng)
    if diag_law is None:
        diag = np.zeros(N)
    else:
        _require_l2(diag_law, "diagonal")
        diag = diag_law.sample(N, rng)
    return TridiagonalMatrix(diag, off)


def sample_alpha(N: int, alpha: float, entry_law: EntryDistribution,
                 seed: SeedSpec) -> TridiagonalMatrix:
    """Power-profile model: coupling i carries ((i+1)/N)**alpha."""
    if N < 1:
        raise ValueError("N must be >= 1")
    sigma = power_profile(N, alpha) if N >= 2 else SigmaSequence(np.empty(0), 1)
    return sample_deformed(N, entry_law, None, sigma, seed)


# -- banded powers: exact normalized traces without eigensolves ----------


def _shifted(v: np.ndarray, t: int, n: int) -> np.ndarray:
    """Length-n array u with u[i] = v[i+t] where defined, else 0."""
    u = np.zeros(n)
    lo = max(0, -t)
    hi = min(n, v.size - t)
    if hi > lo:
        u[lo:hi] = v[lo + t:hi + t]
    return u


def _band_mult_tridiag(band: dict[int, np.ndarray], m: TridiagonalMatrix) -> dict[int, np.ndarray]:
    n = m.N
    diag, off = m.diag, m.offdiag
    out: dict[int, np.ndarray] = {}
    lo = min(band) - 1
    hi = max(band) + 1
    zeros = np.zeros(n)
    for d in range(lo, hi + 1):
        left = band.get(d - 1, zeros)
        mid = band.get(d, zeros)
        right = band.get(d + 1, zeros)
        acc = left * _shifted(off, d - 1, n)
        acc += mid * _shifted(diag, d, n)
        acc += right * _shifted(off, d, n)
        out[d] = acc
    return out


def word_trace(matrices: list[TridiagonalMatrix]) -> float:
    """Normalized trace (1/N) Tr(M_1 M_2 ... M_k) of same-size tridiagonals."""
    if not matrices:
        raise ValueError("word must contain at least one matrix")
    n = matrices[0].N
    if any(m.N != n for m in matrices):
        raise ValueError("all matrices in a word must share the dimension")
    band: dict[int, np.ndarray] = {0: np.ones(n)}
    for m in matrices:
        band = _band_mult_tridiag(band, m)
    return float(np.sum(band[0])) / n


def trace_power(m: TridiagonalMatrix, k: int) -> float:
    """Normalized trace (1/N) Tr(X^k), exact via banded multiplication."""
    if k < 0:
        raise ValueError("power must be >= 0")
    if k == 0:
        return 1.0
    return word_trace([m] * k)

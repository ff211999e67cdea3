"""Eigenvalues of symmetric tridiagonal matrices by Sturm-count bisection.

The bisection route gives certified eigenvalue locations (each true
eigenvalue lies within ``tol`` of a returned one, multiplicities
included) and is the reference implementation at desk scale.  For large
matrices the same contract is served by LAPACK through SciPy; the two
routes are cross-checked against each other and against closed forms in
the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from trispec.core import EmpiricalMeasure
from trispec.ensembles import TridiagonalMatrix

__all__ = [
    "SpectralSample",
    "eigenvalues",
    "sturm_count",
    "char_poly_eval",
    "CharPolyValue",
    "hoffman_wielandt_gap",
]

# zero pivots in the Sturm recursion are replaced by -eps * |m| with the
# standard perturbation size eps = 2**-40
PIVOT_EPS = 2.0**-40

# matrix size above which eigenvalues() defaults to the LAPACK route
BISECT_DEFAULT_LIMIT = 2500


@dataclass(frozen=True)
class SpectralSample:
    """Sorted eigenvalue multiset of one sampled matrix."""

    eigenvalues: np.ndarray
    source_N: int

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if ev.ndim != 1 or ev.size != self.source_N:
            raise ValueError("need one eigenvalue per matrix row")
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        ev = np.ascontiguousarray(ev)
        ev.flags.writeable = False
        object.__setattr__(self, "eigenvalues", ev)

    def measure(self) -> EmpiricalMeasure:
        n = self.eigenvalues.size
        return EmpiricalMeasure(self.eigenvalues, np.full(n, 1.0 / n))


def _entry_scale(m: TridiagonalMatrix) -> float:
    top = max(
        float(np.max(np.abs(m.diag), initial=0.0)),
        2.0 * float(np.max(np.abs(m.offdiag), initial=0.0)),
    )
    return top if top > 0.0 else 1.0


def _gershgorin(m: TridiagonalMatrix) -> tuple[float, float]:
    n = m.N
    rad = np.zeros(n)
    if n > 1:
        rad[:-1] += np.abs(m.offdiag)
        rad[1:] += np.abs(m.offdiag)
    return float(np.min(m.diag - rad)), float(np.max(m.diag + rad))


def sturm_count(m: TridiagonalMatrix, x: float) -> int:
    """Number of eigenvalues strictly less than x.

    Standard sign count of the ratio sequence
    d_k = (x - a_k) - c_{k-1}^2 / d_{k-1}; tiny pivots are replaced by
    -PIVOT_EPS * |m| so exact hits resolve as "not less than x".
    """
    pivmin = PIVOT_EPS * _entry_scale(m)
    diag = m.diag
    offsq = m.offdiag**2
    d = x - diag[0]
    if abs(d) < pivmin:
        d = -pivmin
    count = 1 if d > 0.0 else 0
    for k in range(1, m.N):
        d = (x - diag[k]) - offsq[k - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d > 0.0:
            count += 1
    return count


def _sturm_counts_vec(diag: np.ndarray, offsq: np.ndarray, xs: np.ndarray,
                      pivmin: float) -> np.ndarray:
    """sturm_count at every point of xs, vectorized over the points."""
    d = xs - diag[0]
    np.copyto(d, -pivmin, where=np.abs(d) < pivmin)
    count = (d > 0.0).astype(np.int64)
    for k in range(1, diag.size):
        d = (xs - diag[k]) - offsq[k - 1] / d
        np.copyto(d, -pivmin, where=np.abs(d) < pivmin)
        count += d > 0.0
    return count


def _eig_bisect(m: TridiagonalMatrix, tol: float) -> np.ndarray:
    n = m.N
    pivmin = PIVOT_EPS * _entry_scale(m)
    glo, ghi = _gershgorin(m)
    glo -= 10.0 * pivmin + tol
    ghi += 10.0 * pivmin + tol
    lo = np.full(n, glo)
    hi = np.full(n, ghi)
    diag = m.diag
    offsq = m.offdiag**2
    idx = np.arange(n)
    # bracket invariant: count(lo_j) <= j < count(hi_j)
    max_sweeps = max(1, math.ceil(math.log2(max((ghi - glo) / tol, 2.0)))) + 2
    for _ in range(max_sweeps):
        mid = 0.5 * (lo + hi)
        above = _sturm_counts_vec(diag, offsq, mid, pivmin) > idx
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
        if np.max(hi - lo) <= tol:
            break
    return 0.5 * (lo + hi)


def eigenvalues(m: TridiagonalMatrix, tol: float = 1e-10,
                method: str = "auto") -> SpectralSample:
    """All eigenvalues of ``m``, each within ``tol`` of a true one.

    method "bisect" runs Sturm-count bisection inside Gershgorin
    brackets; "lapack" delegates to scipy.linalg.eigvalsh_tridiagonal;
    "auto" picks bisect up to N=2500 and LAPACK beyond, where the O(N^2)
    python-side bisection stops being pleasant.  Output is deterministic
    for a fixed (matrix, tol, method).
    """
    if tol <= 0.0:
        raise ValueError("tol must be > 0")
    if method not in ("auto", "bisect", "lapack"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "bisect" if m.N <= BISECT_DEFAULT_LIMIT else "lapack"
    if m.N == 1:
        ev = np.array([m.diag[0]])
    elif method == "bisect":
        ev = _eig_bisect(m, tol)
    else:
        ev = eigvalsh_tridiagonal(m.diag, m.offdiag)
    ev = np.sort(ev)
    scale = _entry_scale(m)
    slack = max(1e-8 * m.N * scale, 2.0 * m.N * tol)
    if abs(float(np.sum(ev)) - m.trace()) > slack:
        raise RuntimeError("eigenvalue trace check failed; solver inconsistency")
    return SpectralSample(ev, m.N)


class CharPolyValue(NamedTuple):
    """Scaled characteristic polynomial values.

    The exact values are p_n * 2**log2_scale and p_n_minus_1 *
    2**log2_scale; the shared exponent keeps the recursion inside double
    range for matrices in the thousands.  The resolvent corner
    P_{N-1}/P_N is scale free.
    """

    p_n: complex
    p_n_minus_1: complex
    log2_scale: int

    def ratio(self) -> complex:
        return self.p_n_minus_1 / self.p_n


_RESCALE_HI = 2.0**512
_RESCALE_LO = 2.0**-512


def char_poly_eval(m: TridiagonalMatrix, z: complex) -> CharPolyValue:
    """det(zI - X) and the same for the leading principal (N-1)-submatrix.

    Three-term recursion P_{i+1} = (z - a_{i+1}) P_i - c_i^2 P_{i-1};
    the pair is rescaled by powers of two whenever |P_i| leaves
    [2**-512, 2**512].
    """
    z = complex(z)
    diag = m.diag
    offsq = m.offdiag**2
    prev = 1.0 + 0.0j  # P_0
    cur = z - diag[0]  # P_1
    log2_scale = 0
    for k in range(1, m.N):
        nxt = (z - diag[k]) * cur - offsq[k - 1] * prev
        prev, cur = cur, nxt
        mag = abs(cur)
        if mag > _RESCALE_HI:
            prev *= _RESCALE_LO
            cur *= _RESCALE_LO
            log2_scale += 512
        elif 0.0 < mag < _RESCALE_LO:
            prev *= _RESCALE_HI
            cur *= _RESCALE_HI
            log2_scale -= 512
    return CharPolyValue(cur, prev, log2_scale)


def hoffman_wielandt_gap(a: TridiagonalMatrix, b: TridiagonalMatrix,
                         tol: float = 1e-10) -> tuple[float, float]:
    """(sorted-eigenvalue squared l2 gap, squared Frobenius distance).

    The first component never exceeds the second beyond numerical slack;
    callers assert lhs <= rhs + slack.
    """
    if a.N != b.N:
        raise ValueError("matrices must share the dimension")
    ev_a = eigenvalues(a, tol).eigenvalues
    ev_b = eigenvalues(b, tol).eigenvalues
    lhs = float(np.sum((ev_a - ev_b) ** 2))
    rhs = float(np.sum((a.diag - b.diag) ** 2) + 2.0 * np.sum((a.offdiag - b.offdiag) ** 2))
    return lhs, rhs

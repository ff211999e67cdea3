import math

import numpy as np
import pytest

from trispec.core import EntryDistribution, SeedSpec
from trispec.eigensolve import (
    SpectralSample,
    char_poly_eval,
    eigenvalues,
    hoffman_wielandt_gap,
    sturm_count,
)
from trispec.ensembles import TridiagonalMatrix, sample_deformed, sample_simple
from trispec.sigmaseq import power_profile


def toeplitz(n):
    return TridiagonalMatrix(np.zeros(n), np.ones(n - 1))


def toeplitz_eigs(n):
    return np.sort([2.0 * math.cos(j * math.pi / (n + 1)) for j in range(1, n + 1)])


def test_single_entry_matrix():
    sp = eigenvalues(TridiagonalMatrix(np.zeros(1), np.zeros(0)), 1e-12)
    assert sp.eigenvalues.tolist() == [0.0]


def test_toeplitz_n5_closed_form():
    sp = eigenvalues(toeplitz(5), 1e-12)
    ref = np.array([-math.sqrt(3), -1.0, 0.0, 1.0, math.sqrt(3)])
    assert np.max(np.abs(sp.eigenvalues - ref)) < 1e-11


def test_diagonal_matrix():
    m = TridiagonalMatrix(np.full(7, 2.5), np.zeros(6))
    sp = eigenvalues(m, 1e-12)
    assert np.max(np.abs(sp.eigenvalues - 2.5)) < 1e-11


def test_toeplitz_oracle_across_sizes():
    for n in (1, 2, 3, 5, 17, 129, 512, 2000):
        tol = 1e-10
        sp = eigenvalues(toeplitz(n), tol, method="bisect")
        assert np.max(np.abs(sp.eigenvalues - toeplitz_eigs(n))) < 10 * tol, n


def test_bisect_and_lapack_agree():
    law = EntryDistribution.gaussian(0, 1)
    m = sample_deformed(500, law, law, power_profile(500, 1.0), SeedSpec(44))
    a = eigenvalues(m, 1e-11, method="bisect").eigenvalues
    b = eigenvalues(m, 1e-11, method="lapack").eigenvalues
    assert np.max(np.abs(a - b)) < 1e-9


def test_eigenvalues_rejects_bad_tol():
    with pytest.raises(ValueError):
        eigenvalues(toeplitz(3), 0.0)
    with pytest.raises(ValueError):
        eigenvalues(toeplitz(3), 1e-8, method="qr")


def test_trace_and_frobenius_consistency():
    law = EntryDistribution.gaussian(0.5, 1.0)
    m = sample_deformed(200, law, law, power_profile(200, 0.7), SeedSpec(10))
    ev = eigenvalues(m, 1e-12).eigenvalues
    assert np.sum(ev) == pytest.approx(m.trace(), abs=1e-8 * 200 * 3)
    assert np.sum(ev**2) == pytest.approx(m.frobenius_sq(), rel=1e-8)


def test_sturm_count_examples():
    m = toeplitz(5)
    assert sturm_count(m, -3.0) == 0  # below Gershgorin interval
    assert sturm_count(m, 3.0) == 5   # above Gershgorin interval
    assert sturm_count(m, 0.0) == 2   # -sqrt(3), -1 lie strictly below 0
    assert sturm_count(m, 0.5) == 3
    z = TridiagonalMatrix(np.zeros(1), np.zeros(0))
    assert sturm_count(z, 0.0) == 0
    assert sturm_count(z, 1e-9) == 1


def test_sturm_count_monotone_and_exhaustive():
    law = EntryDistribution.uniform(-1.0, 1.0)
    m = sample_deformed(60, law, law, power_profile(60, 0.0), SeedSpec(3))
    xs = np.linspace(-4, 4, 201)
    counts = [sturm_count(m, x) for x in xs]
    assert counts[0] == 0 and counts[-1] == 60
    assert all(c1 <= c2 for c1, c2 in zip(counts, counts[1:]))


def test_sturm_count_matches_eigenvalues():
    law = EntryDistribution.gaussian(0, 1)
    m = sample_simple(40, law, SeedSpec(99))
    ev = eigenvalues(m, 1e-12).eigenvalues
    rng = SeedSpec(100).generator()
    for x in rng.uniform(-3, 3, 25):
        assert sturm_count(m, x) == int(np.sum(ev < x))


def test_char_poly_base_cases():
    one = TridiagonalMatrix(np.zeros(1), np.zeros(0))
    v = char_poly_eval(one, 2 + 1j)
    assert v.p_n == 2 + 1j and v.p_n_minus_1 == 1.0 and v.log2_scale == 0
    two = toeplitz(2)
    z = 1.7 - 0.3j
    v2 = char_poly_eval(two, z)
    assert v2.p_n == pytest.approx(z * z - 1.0)


def test_char_poly_root_at_eigenvalue():
    z = 2.0 * math.cos(math.pi / 6.0)
    v = char_poly_eval(toeplitz(5), z)
    assert abs(v.p_n) < 1e-10


def test_char_poly_rescaling_tracks_exponent():
    # entries of size 3 make P_N grow like 3^N, far past double range
    n = 2000
    m = TridiagonalMatrix(np.zeros(n), np.full(n - 1, 3.0))
    v = char_poly_eval(m, 10.0 + 1.0j)
    assert v.log2_scale > 0
    assert np.isfinite(v.p_n.real) and abs(v.p_n) <= 2.0**513
    # the scale-free ratio still matches the corner recursion
    from trispec.stieltjes import corner_recursion
    s = corner_recursion(m.offdiag, 10.0 + 1.0j)
    assert abs(v.ratio() - s) / abs(s) < 1e-9


def test_hoffman_wielandt_examples():
    law = EntryDistribution.gaussian(0, 1)
    a = sample_simple(20, law, SeedSpec(1))
    lhs, rhs = hoffman_wielandt_gap(a, a)
    assert lhs == pytest.approx(0.0, abs=1e-12) and rhs == 0.0
    shifted = TridiagonalMatrix(a.diag + 0.5, a.offdiag)
    lhs, rhs = hoffman_wielandt_gap(a, shifted)
    assert rhs == pytest.approx(20 * 0.25, rel=1e-12)
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_hoffman_wielandt_random_pairs():
    law = EntryDistribution.gaussian(0, 1)
    for i in range(30):
        a = sample_deformed(30, law, law, power_profile(30, 0.0), SeedSpec(50, 2 * i))
        b = sample_deformed(30, law, law, power_profile(30, 0.0), SeedSpec(50, 2 * i + 1))
        lhs, rhs = hoffman_wielandt_gap(a, b)
        assert lhs <= rhs + 1e-8


def test_hoffman_wielandt_dimension_mismatch():
    law = EntryDistribution.constant(1.0)
    with pytest.raises(ValueError):
        hoffman_wielandt_gap(sample_simple(3, law, SeedSpec(0)),
                             sample_simple(4, law, SeedSpec(0)))


def test_spectral_sample_validation():
    with pytest.raises(ValueError):
        SpectralSample(np.array([1.0, 0.0]), 2)
    with pytest.raises(ValueError):
        SpectralSample(np.array([0.0]), 2)
    sp = SpectralSample(np.array([-1.0, 1.0]), 2)
    assert sp.measure().moment(2) == pytest.approx(1.0)
